//! Exact models of the arrangement families: the unit circle plus lines.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::qnum::{rat, QNum, QNumJson};
use super::GeometryError;

/// Component id of the circle.
pub const CONIC: &str = "Q";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    A,
    B,
    Bprime,
    Bprimeprime,
    C,
    Cprime,
    Explicit,
}

impl FamilyTag {
    pub fn parse(s: &str) -> Option<FamilyTag> {
        Some(match s {
            "A" => FamilyTag::A,
            "B" => FamilyTag::B,
            "Bprime" | "B'" => FamilyTag::Bprime,
            "Bprimeprime" | "B''" => FamilyTag::Bprimeprime,
            "C" => FamilyTag::C,
            "Cprime" | "C'" => FamilyTag::Cprime,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::A => "A",
            FamilyTag::B => "B",
            FamilyTag::Bprime => "Bprime",
            FamilyTag::Bprimeprime => "Bprimeprime",
            FamilyTag::C => "C",
            FamilyTag::Cprime => "Cprime",
            FamilyTag::Explicit => "Explicit",
        }
    }

    fn is_b_like(&self) -> bool {
        matches!(self, FamilyTag::B | FamilyTag::Bprime | FamilyTag::Bprimeprime)
    }

    fn is_c_like(&self) -> bool {
        matches!(self, FamilyTag::C | FamilyTag::Cprime)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineKind {
    Tangent,
    Secant,
    ExteriorThroughP,
    PencilMember,
}

/// The line `p*x + q*y = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSpec {
    pub p: QNum,
    pub q: QNum,
    pub r: QNum,
    pub component: String,
    pub kind: LineKind,
}

impl LineSpec {
    pub fn new(p: QNum, q: QNum, r: QNum, component: &str, kind: LineKind) -> Self {
        LineSpec { p, q, r, component: component.to_owned(), kind }
    }

    pub fn is_vertical(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_degenerate(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `y` on the line at abscissa `x`.
    pub fn y_at(&self, x: &QNum) -> Result<QNum, GeometryError> {
        self.r.sub(&self.p.mul(x)?)?.div(&self.q)
    }

    pub fn contains(&self, x: &QNum, y: &QNum) -> Result<bool, GeometryError> {
        Ok(self.p.mul(x)?.add(&self.q.mul(y)?)? == self.r)
    }

    /// Same line up to a common nonzero factor.
    pub fn same_as(&self, o: &LineSpec) -> Result<bool, GeometryError> {
        let cross = |u: &QNum, v: &QNum, s: &QNum, t: &QNum| -> Result<bool, GeometryError> {
            Ok(u.mul(t)?.sub(&v.mul(s)?)?.is_zero())
        };
        Ok(cross(&self.p, &self.q, &o.p, &o.q)?
            && cross(&self.p, &self.r, &o.p, &o.r)?
            && cross(&self.q, &self.r, &o.q, &o.r)?)
    }
}

/// Parameters overriding the family defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    /// Abscissas of the tangency points on the upper half circle (family A).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tangent_points: Vec<(i64, i64)>,
    /// Pencil slopes (families B and C).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slopes: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub family: FamilyTag,
    pub n: usize,
    pub lines: Vec<LineSpec>,
    pub pencil_point: Option<(QNum, QNum)>,
    pub params: FamilyParams,
}

pub const DEFAULT_TANGENT_POINTS: [(i64, i64, i64); 5] =
    [(-4, 3, 5), (-3, 4, 5), (-5, 12, 13), (-44, 117, 125), (-12, 35, 37)];
pub const DEFAULT_B_SLOPES: [(i64, i64); 5] = [(-3, 14), (-4, 13), (-5, 14), (-8, 19), (-1, 2)];
pub const DEFAULT_C_SLOPES: [(i64, i64); 5] = [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)];

fn bad(msg: impl Into<String>) -> GeometryError {
    GeometryError::InvalidParams(msg.into())
}

fn pairs_to_rats(v: &[(i64, i64)]) -> Result<Vec<BigRational>, GeometryError> {
    v.iter()
        .map(|&(n, d)| if d == 0 { Err(bad("zero denominator")) } else { Ok(rat(n, d)) })
        .collect()
}

fn default_a(n: usize) -> Result<Vec<(i64, i64)>, GeometryError> {
    if n > DEFAULT_TANGENT_POINTS.len() {
        return Err(bad(format!("no default tangent points for n = {n}; pass tangent_points")));
    }
    Ok(DEFAULT_TANGENT_POINTS[..n].iter().map(|&(x, _, d)| (x, d)).collect())
}

fn default_slopes(table: &[(i64, i64)], n: usize) -> Result<Vec<(i64, i64)>, GeometryError> {
    if n > table.len() {
        return Err(bad(format!("no default slopes for n = {n}; pass slopes")));
    }
    Ok(table[..n].to_vec())
}

fn tangent_at(x: &QNum, y: &QNum, component: &str) -> LineSpec {
    LineSpec::new(x.clone(), y.clone(), QNum::one(), component, LineKind::Tangent)
}

fn build_a(n: usize, params: &FamilyParams) -> Result<Vec<LineSpec>, GeometryError> {
    if n == 0 {
        return Err(bad("family A needs n >= 1"));
    }
    let xs = if params.tangent_points.is_empty() { default_a(n)? } else { params.tangent_points.clone() };
    if xs.len() != n {
        return Err(bad(format!("expected {n} tangent points, got {}", xs.len())));
    }
    let xs = pairs_to_rats(&xs)?;
    let mut prev = -BigRational::one();
    let mut lines = Vec::with_capacity(n);
    for (i, x) in xs.iter().enumerate() {
        if *x <= prev || !x.is_negative() {
            return Err(bad("tangent abscissas must satisfy -1 < x_1 < ... < x_n < 0"));
        }
        prev = x.clone();
        let y = QNum::sqrt_rational(&(BigRational::one() - x * x))?;
        lines.push(tangent_at(&QNum::rational(x.clone()), &y, &format!("T{}", i + 1)));
    }
    Ok(lines)
}

/// Pencil through `(2, 0)`: `T1` lower tangent, `T2` upper tangent, `L_i` with
/// negative slopes of increasing magnitude below `1/sqrt 3`.
fn build_b(family: FamilyTag, n: usize, params: &FamilyParams) -> Result<Vec<LineSpec>, GeometryError> {
    let slopes = if params.slopes.is_empty() { default_slopes(&DEFAULT_B_SLOPES, n)? } else { params.slopes.clone() };
    if slopes.len() != n {
        return Err(bad(format!("expected {n} slopes, got {}", slopes.len())));
    }
    let slopes = pairs_to_rats(&slopes)?;
    let third = rat(1, 3);
    let mut prev = BigRational::zero();
    for m in &slopes {
        if !m.is_negative() || m.abs() <= prev.abs() || m * m >= third {
            return Err(bad("B slopes must be negative, strictly increasing in size, with m^2 < 1/3"));
        }
        prev = m.clone();
    }
    let half = QNum::frac(1, 2);
    let root3_half = QNum::sqrt_rational(&rat(3, 4))?;
    let mut lines = Vec::new();
    if family == FamilyTag::B {
        lines.push(tangent_at(&half, &root3_half.neg(), "T1"));
    }
    if family != FamilyTag::Bprimeprime {
        lines.push(tangent_at(&half, &root3_half, "T2"));
    }
    for (i, m) in slopes.iter().enumerate() {
        // y = m (x - 2)
        let m = QNum::rational(m.clone());
        lines.push(LineSpec::new(
            m.neg(),
            QNum::one(),
            m.scale(&rat(-2, 1)),
            &format!("L{}", i + 1),
            LineKind::PencilMember,
        ));
    }
    Ok(lines)
}

/// Pencil through `(0, 1)`: `T` is `y = 1`, `L_i` is `y = 1 + m_i x`.
fn build_c(family: FamilyTag, n: usize, params: &FamilyParams) -> Result<Vec<LineSpec>, GeometryError> {
    let slopes = if params.slopes.is_empty() { default_slopes(&DEFAULT_C_SLOPES, n)? } else { params.slopes.clone() };
    if slopes.len() != n {
        return Err(bad(format!("expected {n} slopes, got {}", slopes.len())));
    }
    let slopes = pairs_to_rats(&slopes)?;
    let mut prev = BigRational::one();
    for m in &slopes {
        if !m.is_positive() || *m >= prev {
            return Err(bad("C slopes must lie in (0, 1) and strictly decrease"));
        }
        prev = m.clone();
    }
    let mut lines = Vec::new();
    for (i, m) in slopes.iter().enumerate() {
        lines.push(LineSpec::new(
            QNum::rational(-m.clone()),
            QNum::one(),
            QNum::one(),
            &format!("L{}", i + 1),
            LineKind::PencilMember,
        ));
    }
    if family == FamilyTag::C {
        lines.push(LineSpec::new(QNum::zero(), QNum::one(), QNum::one(), "T", LineKind::Tangent));
    }
    Ok(lines)
}

/// Builds one of the named families with validated parameters.
pub fn build_family(family: FamilyTag, n: usize, params: Option<FamilyParams>) -> Result<Arrangement, GeometryError> {
    let params = params.unwrap_or_default();
    let (lines, pencil_point) = match family {
        FamilyTag::A => (build_a(n, &params)?, None),
        f if f.is_b_like() => (build_b(f, n, &params)?, Some((QNum::int(2), QNum::zero()))),
        f if f.is_c_like() => (build_c(f, n, &params)?, Some((QNum::zero(), QNum::one()))),
        _ => return Err(bad("explicit arrangements are built from line lists")),
    };
    let arr = Arrangement { family, n, lines, pencil_point, params };
    arr.check_family_invariants()?;
    Ok(arr)
}

impl Arrangement {
    pub fn explicit(lines: Vec<LineSpec>) -> Result<Arrangement, GeometryError> {
        let n = lines.len();
        let arr = Arrangement { family: FamilyTag::Explicit, n, lines, pencil_point: None, params: FamilyParams::default() };
        arr.check_family_invariants()?;
        Ok(arr)
    }

    pub fn line(&self, component: &str) -> Option<&LineSpec> {
        self.lines.iter().find(|l| l.component == component)
    }

    /// Component ids: the circle first, then the lines in storage order.
    pub fn components(&self) -> Vec<String> {
        std::iter::once(CONIC.to_owned()).chain(self.lines.iter().map(|l| l.component.clone())).collect()
    }

    /// Tangency discriminant `p^2 + q^2 - r^2` (zero iff tangent to the circle).
    pub fn circle_discriminant(l: &LineSpec) -> Result<QNum, GeometryError> {
        l.p.mul(&l.p)?.add(&l.q.mul(&l.q)?)?.sub(&l.r.mul(&l.r)?)
    }

    pub(crate) fn check_family_invariants(&self) -> Result<(), GeometryError> {
        let mut names = std::collections::HashSet::new();
        for l in &self.lines {
            if l.component == CONIC || !names.insert(l.component.as_str()) {
                return Err(bad(format!("duplicate component id {:?}", l.component)));
            }
            if l.is_degenerate() {
                return Err(bad(format!("degenerate line {}", l.component)));
            }
        }
        for l in &self.lines {
            if l.kind == LineKind::Tangent && !Self::circle_discriminant(l)?.is_zero() {
                return Err(bad(format!("{} is not tangent to the circle", l.component)));
            }
            if let Some((px, py)) = &self.pencil_point {
                if !l.contains(px, py)? {
                    return Err(bad(format!("{} misses the pencil point", l.component)));
                }
            }
        }
        if self.family.is_c_like() {
            let (px, py) = self.pencil_point.as_ref().ok_or_else(|| bad("C needs a pencil point"))?;
            if px.mul(px)?.add(&py.mul(py)?)? != QNum::one() {
                return Err(bad("C pencil point must lie on the circle"));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonLine {
    p: QNumJson,
    q: QNumJson,
    r: QNumJson,
    component: String,
}

#[derive(Serialize, Deserialize)]
struct JsonArrangement {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<FamilyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lines: Option<Vec<JsonLine>>,
}

fn explicit_kind(l: &LineSpec) -> Result<LineKind, GeometryError> {
    Ok(match Arrangement::circle_discriminant(l)?.signum() {
        0 => LineKind::Tangent,
        1 => LineKind::Secant,
        _ => LineKind::ExteriorThroughP,
    })
}

/// Named families serialize as `{"family","n","params"}`, explicit ones as
/// `{"lines":[...]}`; with `with_lines` the resolved lines are included too.
pub fn arrangement_to_json(arr: &Arrangement, with_lines: bool) -> Result<serde_json::Value, GeometryError> {
    let lines = if with_lines || arr.family == FamilyTag::Explicit {
        Some(
            arr.lines
                .iter()
                .map(|l| {
                    Ok(JsonLine {
                        p: QNumJson::from_qnum(&l.p)?,
                        q: QNumJson::from_qnum(&l.q)?,
                        r: QNumJson::from_qnum(&l.r)?,
                        component: l.component.clone(),
                    })
                })
                .collect::<Result<Vec<_>, GeometryError>>()?,
        )
    } else {
        None
    };
    let named = arr.family != FamilyTag::Explicit;
    let j = JsonArrangement {
        family: named.then(|| arr.family.as_str().to_owned()),
        n: named.then_some(arr.n),
        params: named.then(|| arr.params.clone()),
        lines,
    };
    serde_json::to_value(j).map_err(|e| GeometryError::Json(e.to_string()))
}

pub fn arrangement_from_json(v: &serde_json::Value) -> Result<Arrangement, GeometryError> {
    let j: JsonArrangement = serde_json::from_value(v.clone()).map_err(|e| GeometryError::Json(e.to_string()))?;
    if let Some(fam) = j.family.as_deref().filter(|f| *f != "Explicit") {
        let tag = FamilyTag::parse(fam).ok_or_else(|| bad(format!("unknown family {fam:?}")))?;
        let n = j.n.ok_or_else(|| bad("missing n"))?;
        return build_family(tag, n, j.params);
    }
    let lines = j.lines.ok_or_else(|| bad("need either family/n or lines"))?;
    let lines = lines
        .into_iter()
        .map(|l| {
            let mut spec = LineSpec::new(l.p.to_qnum()?, l.q.to_qnum()?, l.r.to_qnum()?, &l.component, LineKind::Secant);
            spec.kind = explicit_kind(&spec)?;
            Ok(spec)
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    Arrangement::explicit(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_tangent_lines() {
        let arr = build_family(FamilyTag::A, 2, None).unwrap();
        assert_eq!(arr.lines[0].p, QNum::frac(-4, 5));
        assert_eq!(arr.lines[0].q, QNum::frac(3, 5));
        assert_eq!(arr.lines[1].p, QNum::frac(-3, 5));
        assert_eq!(arr.lines[1].q, QNum::frac(4, 5));
        assert!(arr.lines.iter().all(|l| l.r == QNum::one()));
    }

    #[test]
    fn parameter_validation() {
        let bad_order = FamilyParams { tangent_points: vec![(-3, 5), (-4, 5)], slopes: vec![] };
        assert!(build_family(FamilyTag::A, 2, Some(bad_order)).is_err());
        let steep = FamilyParams { tangent_points: vec![], slopes: vec![(-1, 1)] };
        assert!(build_family(FamilyTag::B, 1, Some(steep)).is_err());
        let rising = FamilyParams { tangent_points: vec![], slopes: vec![(1, 3), (1, 2)] };
        assert!(build_family(FamilyTag::C, 2, Some(rising)).is_err());
        assert!(build_family(FamilyTag::A, 0, None).is_err());
        assert!(build_family(FamilyTag::A, 6, None).is_err());
    }

    #[test]
    fn family_members() {
        assert_eq!(build_family(FamilyTag::B, 2, None).unwrap().lines.len(), 4);
        assert_eq!(build_family(FamilyTag::Bprime, 2, None).unwrap().lines.len(), 3);
        assert_eq!(build_family(FamilyTag::Bprimeprime, 2, None).unwrap().lines.len(), 2);
        assert_eq!(build_family(FamilyTag::C, 2, None).unwrap().lines.len(), 3);
        assert_eq!(build_family(FamilyTag::Cprime, 2, None).unwrap().lines.len(), 2);
    }

    #[test]
    fn json_round_trips() {
        let arr = build_family(FamilyTag::B, 2, None).unwrap();
        let v = arrangement_to_json(&arr, false).unwrap();
        assert_eq!(arrangement_from_json(&v).unwrap(), arr);
        let explicit = Arrangement::explicit(arr.lines.clone()).unwrap();
        let v = arrangement_to_json(&explicit, false).unwrap();
        let back = arrangement_from_json(&v).unwrap();
        assert_eq!(back.lines.len(), 4);
        assert_eq!(back.lines[0].kind, LineKind::Tangent);
        assert_eq!(back.lines[2].kind, LineKind::Secant);
    }
}
