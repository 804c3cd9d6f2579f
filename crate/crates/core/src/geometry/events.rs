//! Intersections, fiber strand tables and the ordered schedule of singular fibers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::arrangement::{Arrangement, FamilyTag, LineSpec, CONIC};
use super::qnum::{simplest_between, QNum};
use super::GeometryError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub x: QNum,
    pub y: QNum,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug)]
pub enum Curve<'a> {
    Circle,
    Line(&'a LineSpec),
}

fn line_line(a: &LineSpec, b: &LineSpec) -> Result<Vec<IntersectionPoint>, GeometryError> {
    let det = a.p.mul(&b.q)?.sub(&a.q.mul(&b.p)?)?;
    if det.is_zero() {
        return Ok(vec![]);
    }
    let x = a.r.mul(&b.q)?.sub(&b.r.mul(&a.q)?)?.div(&det)?;
    let y = a.p.mul(&b.r)?.sub(&b.p.mul(&a.r)?)?.div(&det)?;
    Ok(vec![IntersectionPoint { x, y, multiplicity: 1 }])
}

fn line_circle(l: &LineSpec) -> Result<Vec<IntersectionPoint>, GeometryError> {
    let norm = l.p.mul(&l.p)?.add(&l.q.mul(&l.q)?)?;
    let disc = norm.sub(&l.r.mul(&l.r)?)?;
    let root = match disc.as_rational() {
        Some(e) if disc.signum() >= 0 => QNum::sqrt_rational(e)?,
        Some(_) => return Ok(vec![]),
        None => {
            return Err(GeometryError::NonRepresentable(format!(
                "line {} meets the circle at nested radicals",
                l.component
            )))
        }
    };
    if l.q.is_zero() {
        // vertical line p x = r
        let x = l.r.div(&l.p)?;
        let rest = QNum::one().sub(&x.mul(&x)?)?;
        let Some(rr) = rest.as_rational() else {
            return Err(GeometryError::NonRepresentable(format!("line {}", l.component)));
        };
        return Ok(match rest.signum() {
            -1 => vec![],
            0 => vec![IntersectionPoint { x, y: QNum::zero(), multiplicity: 2 }],
            _ => {
                let y = QNum::sqrt_rational(rr)?;
                vec![
                    IntersectionPoint { x: x.clone(), y: y.neg(), multiplicity: 1 },
                    IntersectionPoint { x, y, multiplicity: 1 },
                ]
            }
        });
    }
    let pr = l.p.mul(&l.r)?;
    let qe = l.q.mul(&root)?;
    let mut out = Vec::new();
    for (i, s) in [qe.clone(), qe.neg()].iter().enumerate() {
        if disc.is_zero() && i == 1 {
            break;
        }
        let x = pr.add(s)?.div(&norm)?;
        let y = l.y_at(&x)?;
        out.push(IntersectionPoint { x, y, multiplicity: if disc.is_zero() { 2 } else { 1 } });
    }
    out.sort_by(|a, b| a.x.cmp(&b.x));
    Ok(out)
}

/// Exact intersection points; a tangency is one point of multiplicity 2.
pub fn intersect(a: Curve<'_>, b: Curve<'_>) -> Result<Vec<IntersectionPoint>, GeometryError> {
    match (a, b) {
        (Curve::Line(l), Curve::Line(m)) => line_line(l, m),
        (Curve::Line(l), Curve::Circle) | (Curve::Circle, Curve::Line(l)) => line_circle(l),
        (Curve::Circle, Curve::Circle) => Err(GeometryError::InvalidParams("a curve does not meet itself".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum BranchTag {
    LowerCircle,
    UpperCircle,
    Line,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub component: String,
    pub branch: BranchTag,
    pub y: QNum,
}

/// Strands of a regular fiber, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandTable {
    pub x: QNum,
    pub strands: Vec<Strand>,
}

impl StrandTable {
    pub fn components(&self) -> Vec<&str> {
        self.strands.iter().map(|s| s.component.as_str()).collect()
    }

    /// Position of the strand of `component` (with `branch` for the circle).
    pub fn position(&self, component: &str, branch: BranchTag) -> Option<usize> {
        self.strands.iter().position(|s| s.component == component && s.branch == branch)
    }
}

/// Strands at a regular abscissa, sorted by exact `y`.
pub fn strand_order_at(arr: &Arrangement, x: &QNum) -> Result<StrandTable, GeometryError> {
    let mut strands = Vec::new();
    let one = QNum::one();
    if x.abs_cmp_one() == std::cmp::Ordering::Equal {
        return Err(GeometryError::SingularFiber(format!("x = {x} is a branch point")));
    }
    if x.abs_cmp_one() == std::cmp::Ordering::Less {
        let r = one.sub(&x.mul(x)?)?;
        let r = r.as_rational().ok_or_else(|| GeometryError::NonRepresentable(format!("circle at x = {x}")))?;
        let y = QNum::sqrt_rational(r)?;
        strands.push(Strand { component: CONIC.into(), branch: BranchTag::LowerCircle, y: y.neg() });
        strands.push(Strand { component: CONIC.into(), branch: BranchTag::UpperCircle, y });
    }
    for l in &arr.lines {
        if l.is_vertical() {
            return Err(GeometryError::NotGeneric(format!("vertical line {}", l.component)));
        }
        strands.push(Strand { component: l.component.clone(), branch: BranchTag::Line, y: l.y_at(x)? });
    }
    strands.sort_by(|a, b| a.y.cmp(&b.y));
    if strands.windows(2).any(|w| w[0].y == w[1].y) {
        return Err(GeometryError::SingularFiber(format!("x = {x} meets a singular point")));
    }
    Ok(StrandTable { x: x.clone(), strands })
}

impl QNum {
    fn abs_cmp_one(&self) -> std::cmp::Ordering {
        let a = if self.signum() < 0 { self.neg() } else { self.clone() };
        a.cmp(&QNum::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchSide {
    /// Circle appears (x = -1); strands index the fiber to the right.
    Opening,
    /// Circle disappears (x = 1).
    Closing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    Branch(BranchSide),
    Node,
    Tangency,
    /// `ignored`: offset (within `strands`) of a circle strand that is tangent to
    /// one of the lines there and is left out of the local relators.
    MultiplePoint { k: usize, ignored: Option<usize> },
    Composite(Vec<Event>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub x: QNum,
    pub kind: EventKind,
    /// Consecutive strand positions, bottom to top.
    pub strands: Vec<usize>,
    /// Component id of each involved strand.
    pub components: Vec<String>,
    pub point: Option<(QNum, QNum)>,
    /// Regular fiber just left of the event (absent for the opening branch).
    pub left: Option<StrandTable>,
    /// Regular fiber just right of the event.
    pub right: StrandTable,
}

impl Event {
    /// The local events of this fiber (itself unless composite).
    pub fn locals(&self) -> Vec<&Event> {
        match &self.kind {
            EventKind::Composite(subs) => subs.iter().collect(),
            _ => vec![self],
        }
    }

    pub fn label(&self) -> String {
        let name = match &self.kind {
            EventKind::Branch(BranchSide::Opening) => "Branch(opening)".to_owned(),
            EventKind::Branch(BranchSide::Closing) => "Branch(closing)".to_owned(),
            EventKind::Node => "Node".to_owned(),
            EventKind::Tangency => "Tangency".to_owned(),
            EventKind::MultiplePoint { k, .. } => format!("MultiplePoint({k})"),
            EventKind::Composite(subs) => {
                format!("Composite[{}]", subs.iter().map(Event::label).collect::<Vec<_>>().join(", "))
            }
        };
        format!("{name}@{}", self.x)
    }
}

/// A singular point with everything passing through it.
#[derive(Clone, Debug)]
struct SingularPoint {
    x: QNum,
    y: QNum,
    lines: BTreeSet<usize>,
    tangent_lines: BTreeSet<usize>,
    circle: bool,
    branch: bool,
}

fn collect_points(arr: &Arrangement) -> Result<Vec<SingularPoint>, GeometryError> {
    let mut pts: Vec<SingularPoint> = Vec::new();
    fn slot<'a>(pts: &'a mut Vec<SingularPoint>, x: &QNum, y: &QNum) -> &'a mut SingularPoint {
        if let Some(i) = pts.iter().position(|p| &p.x == x && &p.y == y) {
            return &mut pts[i];
        }
        pts.push(SingularPoint {
            x: x.clone(),
            y: y.clone(),
            lines: BTreeSet::new(),
            tangent_lines: BTreeSet::new(),
            circle: false,
            branch: false,
        });
        pts.last_mut().expect("just pushed")
    }
    for x in [-1, 1] {
        let s = slot(&mut pts, &QNum::int(x), &QNum::zero());
        s.circle = true;
        s.branch = true;
    }
    for (i, l) in arr.lines.iter().enumerate() {
        for ip in intersect(Curve::Line(l), Curve::Circle)? {
            let s = slot(&mut pts, &ip.x, &ip.y);
            s.circle = true;
            s.lines.insert(i);
            if ip.multiplicity == 2 {
                s.tangent_lines.insert(i);
            }
        }
        for (j, m) in arr.lines.iter().enumerate().skip(i + 1) {
            for ip in intersect(Curve::Line(l), Curve::Line(m))? {
                let s = slot(&mut pts, &ip.x, &ip.y);
                s.lines.insert(i);
                s.lines.insert(j);
            }
        }
    }
    pts.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
    Ok(pts)
}

fn sample_between(lo: Option<&QNum>, hi: Option<&QNum>) -> QNum {
    let r = match (lo, hi) {
        (Some(lo), Some(hi)) => simplest_between(lo, hi),
        (Some(lo), None) => BigRational::from_integer(lo.floor() + 1),
        (None, Some(hi)) => BigRational::from_integer(hi.floor() - 1),
        (None, None) => BigRational::from_integer(BigInt::from(0)),
    };
    QNum::rational(r)
}

fn local_event(
    arr: &Arrangement,
    sp: &SingularPoint,
    left: Option<&StrandTable>,
    right: &StrandTable,
) -> Result<Event, GeometryError> {
    let side = if sp.x.signum() < 0 { BranchSide::Opening } else { BranchSide::Closing };
    let table = match (sp.branch, side) {
        (true, BranchSide::Opening) => right,
        _ => left.ok_or_else(|| GeometryError::NotGeneric(format!("event at x = {} left of the base fiber", sp.x)))?,
    };
    if sp.branch && !sp.lines.is_empty() {
        return Err(GeometryError::NotGeneric(format!("a line passes through the branch point x = {}", sp.x)));
    }
    let mut strands: Vec<usize> = Vec::new();
    let mut circle_pos = None;
    if sp.circle {
        let branches: &[BranchTag] = if sp.branch {
            &[BranchTag::LowerCircle, BranchTag::UpperCircle]
        } else if sp.y.signum() > 0 {
            &[BranchTag::UpperCircle]
        } else {
            &[BranchTag::LowerCircle]
        };
        for b in branches {
            let pos = table
                .position(CONIC, *b)
                .ok_or_else(|| GeometryError::NotGeneric(format!("circle strand missing at x = {}", sp.x)))?;
            strands.push(pos);
            circle_pos = Some(pos);
        }
    }
    for &i in &sp.lines {
        let pos = table
            .position(&arr.lines[i].component, BranchTag::Line)
            .ok_or_else(|| GeometryError::NotGeneric(format!("line strand missing at x = {}", sp.x)))?;
        strands.push(pos);
    }
    strands.sort_unstable();
    if strands.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(GeometryError::NotGeneric(format!("strands at x = {} are not adjacent", sp.x)));
    }
    let kind = match (sp.circle, sp.lines.len(), sp.tangent_lines.len()) {
        (true, 0, _) if sp.branch => EventKind::Branch(side),
        (true, 1, 1) => EventKind::Tangency,
        (true, 1, 0) => EventKind::Node,
        (true, k, 0) => EventKind::MultiplePoint { k: k + 1, ignored: None },
        (true, k, 1) => {
            let c = circle_pos.expect("circle strand");
            EventKind::MultiplePoint { k: k + 1, ignored: Some(strands.iter().position(|&s| s == c).expect("present")) }
        }
        (false, 2, _) => EventKind::Node,
        (false, k, _) if k >= 3 => EventKind::MultiplePoint { k, ignored: None },
        _ => return Err(GeometryError::NotGeneric(format!("unsupported singular point at x = {}", sp.x))),
    };
    let components = strands.iter().map(|&s| table.strands[s].component.clone()).collect();
    Ok(Event {
        x: sp.x.clone(),
        kind,
        strands,
        components,
        point: Some((sp.x.clone(), sp.y.clone())),
        left: left.cloned(),
        right: right.clone(),
    })
}

/// Singular fibers sorted by exact abscissa; simultaneous local events are
/// merged into one composite fiber.
pub fn compute_events(arr: &Arrangement) -> Result<Vec<Event>, GeometryError> {
    let pts = collect_points(arr)?;
    let mut xs: Vec<QNum> = Vec::new();
    for p in &pts {
        if xs.last() != Some(&p.x) {
            xs.push(p.x.clone());
        }
    }
    let mut events = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        let left = if i == 0 { None } else { Some(strand_order_at(arr, &sample_between(Some(&xs[i - 1]), Some(x)))?) };
        let right = strand_order_at(arr, &sample_between(Some(x), xs.get(i + 1)))?;
        let mut locals = pts
            .iter()
            .filter(|p| &p.x == x)
            .map(|p| local_event(arr, p, left.as_ref(), &right))
            .collect::<Result<Vec<_>, _>>()?;
        locals.sort_by_key(|e| e.strands[0]);
        let ev = if locals.len() == 1 {
            locals.pop().expect("one")
        } else {
            Event {
                x: x.clone(),
                strands: locals.iter().flat_map(|e| e.strands.iter().copied()).collect(),
                components: locals.iter().flat_map(|e| e.components.iter().cloned()).collect(),
                point: None,
                left,
                right,
                kind: EventKind::Composite(locals),
            }
        };
        events.push(ev);
    }
    Ok(events)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    DuplicateLine,
    VerticalLine,
    DegenerateLine,
    FamilyInvariant,
    SimultaneousEvents,
    LineThroughBranchPoint,
    EventLeftOfBase,
    NonRepresentable,
    UnsupportedSingularity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub violations: Vec<Violation>,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { kind, detail: detail.into() });
    }
}

/// Collects every genericity problem instead of stopping at the first.
pub fn validate_genericity(arr: &Arrangement) -> GenericityReport {
    let mut rep = GenericityReport::default();
    for (i, l) in arr.lines.iter().enumerate() {
        if l.is_degenerate() {
            rep.push(ViolationKind::DegenerateLine, format!("line {}", l.component));
        } else if l.is_vertical() {
            rep.push(ViolationKind::VerticalLine, format!("vertical line {}", l.component));
        }
        for m in &arr.lines[i + 1..] {
            if l.same_as(m).unwrap_or(false) {
                rep.push(ViolationKind::DuplicateLine, format!("duplicate line {} = {}", l.component, m.component));
            }
        }
    }
    if let Err(e) = arr.check_family_invariants() {
        rep.push(ViolationKind::FamilyInvariant, e.to_string());
    }
    if !rep.is_generic() {
        return rep;
    }
    let pts = match collect_points(arr) {
        Ok(p) => p,
        Err(e) => {
            rep.push(ViolationKind::NonRepresentable, e.to_string());
            return rep;
        }
    };
    for p in &pts {
        if p.branch && !p.lines.is_empty() {
            rep.push(ViolationKind::LineThroughBranchPoint, format!("x = {}", p.x));
        }
        if p.x < QNum::int(-1) {
            rep.push(ViolationKind::EventLeftOfBase, format!("singular point at x = {}", p.x));
        }
    }
    for w in pts.windows(2) {
        if w[0].x == w[1].x {
            let both_tangencies = [&w[0], &w[1]]
                .iter()
                .all(|p| p.circle && p.lines.len() == 1 && p.tangent_lines.len() == 1);
            if !(arr.family == FamilyTag::B && both_tangencies) {
                rep.push(ViolationKind::SimultaneousEvents, format!("two singular points at x = {}", w[0].x));
            }
        }
    }
    if rep.is_generic() {
        if let Err(e) = compute_events(arr) {
            let kind = match e {
                GeometryError::NonRepresentable(_) => ViolationKind::NonRepresentable,
                _ => ViolationKind::UnsupportedSingularity,
            };
            rep.push(kind, e.to_string());
        }
    }
    rep
}
