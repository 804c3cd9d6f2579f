//! Closed-form presentations of the three families and their relatives,
//! with meridian tables.

use crate::algebra::{parse_word, GeneratorLabel, Meridian, Presentation, Word};
use crate::geometry::CONIC;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub presentation: Presentation,
    pub meridians: Vec<Meridian>,
}

/// Indexing of the circle meridian chain in the tangent-line family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainVariant {
    /// `k_{i+1} = t_i k_i t_i^-1` for `1 <= i < n`.
    Forward,
    /// `k_i = t_i k_{i-1} t_i^-1` for `2 <= i <= n`.
    Shifted,
}

struct Builder {
    gens: Vec<GeneratorLabel>,
    rels: Vec<String>,
    meridians: Vec<(String, String)>,
}

impl Builder {
    fn new() -> Self {
        Builder { gens: Vec::new(), rels: Vec::new(), meridians: Vec::new() }
    }

    fn gen(&mut self, name: &str, component: Option<&str>) {
        self.gens.push(GeneratorLabel::new(name, component));
    }

    fn rel(&mut self, r: String) {
        self.rels.push(r);
    }

    fn meridian(&mut self, component: &str, word: String) {
        self.meridians.push((component.to_owned(), word));
    }

    fn build(self) -> Reference {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        let parse = |s: &str| parse_word(s, &names).expect("reference words are well formed");
        let rels: Vec<Word> = self.rels.iter().map(|r| parse(r)).collect();
        let meridians = self.meridians.iter().map(|(c, w)| Meridian { component: c.clone(), word: parse(w) }).collect();
        Reference {
            presentation: Presentation::new(self.gens.clone(), rels).expect("distinct names"),
            meridians,
        }
    }
}

/// `[a, b]` over simple products, with inverses written out.
fn commutator(a: &[&str], b: &[&str]) -> String {
    let inv = |xs: &[&str]| -> Vec<String> {
        xs.iter().rev().map(|x| if let Some(y) = x.strip_suffix("^-1") { y.to_owned() } else { format!("{x}^-1") }).collect()
    };
    let mut parts: Vec<String> = a.iter().map(|s| s.to_string()).collect();
    parts.extend(b.iter().map(|s| s.to_string()));
    parts.extend(inv(a));
    parts.extend(inv(b));
    parts.join("*")
}

fn tangency(a: &str, b: &str) -> String {
    format!("{a}*{b}*{a}*{b}*{a}^-1*{b}^-1*{a}^-1*{b}^-1")
}

fn lambda_desc(n: usize) -> Vec<String> {
    (1..=n).rev().map(|i| format!("l{i}")).collect()
}

/// Tangent-line family: generators `k1..kn, t1..tn`.
pub fn tangent_family(n: usize, variant: ChainVariant) -> Reference {
    let mut b = Builder::new();
    for i in 1..=n {
        b.gen(&format!("k{i}"), Some(CONIC));
    }
    for i in 1..=n {
        b.gen(&format!("t{i}"), Some(&format!("T{i}")));
    }
    for i in 2..=n {
        let r = match variant {
            ChainVariant::Forward => format!("k{i}*t{j}*k{j}^-1*t{j}^-1", j = i - 1),
            ChainVariant::Shifted => format!("k{i}*t{i}*k{j}^-1*t{i}^-1", j = i - 1),
        };
        b.rel(r);
    }
    for i in 1..=n {
        b.rel(tangency(&format!("k{i}"), &format!("t{i}")));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let (k, t, tj) = (format!("k{i}"), format!("t{i}"), format!("t{j}"));
            b.rel(commutator(&[&format!("{k}^-1"), &t, &k], &[&tj]));
        }
    }
    let mut proj: Vec<String> = (1..=n).rev().map(|i| format!("t{i}")).collect();
    proj.push("k1^2".into());
    b.rel(proj.join("*"));
    b.meridian(CONIC, "k1".into());
    for i in 1..=n {
        b.meridian(&format!("T{i}"), format!("t{i}"));
    }
    b.build()
}

/// Two tangent lines: one tangency relator.
pub fn two_tangents() -> Reference {
    let mut b = Builder::new();
    b.gen("t", Some("T1"));
    b.gen("k", Some(CONIC));
    b.rel(tangency("t", "k"));
    b.meridian(CONIC, "k".into());
    b.meridian("T1", "t".into());
    b.meridian("T2", "k^-2*t^-1".into());
    b.build()
}

/// Three tangent lines after the change of generators.
pub fn three_tangents() -> Reference {
    let mut b = Builder::new();
    b.gen("t", Some("T1"));
    b.gen("s", Some("T3"));
    b.gen("k", Some(CONIC));
    b.rel(tangency("t", "k"));
    b.rel(tangency("s", "k"));
    b.rel(commutator(&["s"], &["t"]));
    b.meridian(CONIC, "k".into());
    b.meridian("T1", "t".into());
    b.meridian("T2", "s^-1*k^-1*t^-1*k^-1".into());
    b.meridian("T3", "s".into());
    b.build()
}

fn pencil_gens(b: &mut Builder, n: usize) {
    for i in 1..=n {
        b.gen(&format!("l{i}"), Some(&format!("L{i}")));
        b.meridian(&format!("L{i}"), format!("l{i}"));
    }
}

/// Pencil family before simplification: six relator types.
pub fn outer_pencil_raw(n: usize) -> Reference {
    let mut b = Builder::new();
    b.gen("t", Some("T1"));
    b.gen("k", Some(CONIC));
    b.meridian(CONIC, "k".into());
    b.meridian("T1", "t".into());
    pencil_gens(&mut b, n);
    b.gen("s", Some("T2"));
    b.meridian("T2", "s".into());
    b.rel(tangency("k", "t"));
    b.rel(tangency("k", "s"));
    b.rel("t^-1*k*t*s*k^-1*s^-1".into());
    for i in 1..=n {
        b.rel(commutator(&["k"], &[&format!("l{i}")]));
    }
    for i in 1..=n {
        b.rel(commutator(&["s", "k", "s^-1"], &[&format!("l{i}")]));
    }
    let mut proj = vec!["s".to_owned()];
    proj.extend(lambda_desc(n));
    proj.push("k^2*t".into());
    b.rel(proj.join("*"));
    b.build()
}

/// Pencil family through an outside point.
pub fn outer_pencil(n: usize) -> Reference {
    let mut b = Builder::new();
    b.gen("t", Some("T1"));
    b.gen("k", Some(CONIC));
    b.meridian(CONIC, "k".into());
    b.meridian("T1", "t".into());
    pencil_gens(&mut b, n);
    b.rel(tangency("k", "t"));
    for i in 1..=n {
        b.rel(commutator(&["k"], &[&format!("l{i}")]));
    }
    for i in 1..=n {
        b.rel(commutator(&["t^-1", "k", "t"], &[&format!("l{i}")]));
    }
    let mut sigma = lambda_desc(n);
    sigma.push("k^2*t".into());
    b.meridian("T2", inverse_text(&sigma.join("*")));
    b.build()
}

fn inverse_text(w: &str) -> String {
    w.split('*')
        .rev()
        .map(|f| match f.split_once('^') {
            Some((g, e)) => format!("{g}^{}", -e.parse::<i64>().expect("integer exponent")),
            None => format!("{f}^-1"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn commuting_pencil(n: usize, missing: &str) -> Reference {
    let mut b = Builder::new();
    b.gen("k", Some(CONIC));
    b.meridian(CONIC, "k".into());
    pencil_gens(&mut b, n);
    for i in 1..=n {
        b.rel(commutator(&["k"], &[&format!("l{i}")]));
    }
    let mut m = lambda_desc(n);
    m.push("k^2".into());
    b.meridian(missing, inverse_text(&m.join("*")));
    b.build()
}

/// Pencil family with the first tangent removed; the remaining tangent has
/// meridian `(l_n..l_1 k^2)^-1`.
pub fn outer_pencil_one_tangent(n: usize) -> Reference {
    commuting_pencil(n, "T2")
}

/// Pencil through a point of the circle; `T` has meridian `(l_n..l_1 k^2)^-1`.
pub fn circle_pencil(n: usize) -> Reference {
    commuting_pencil(n, "T")
}
