//! Text and JSON encodings of words and presentations.
//!
//! Text: `< g1, g2 | w1, w2 >` where words are `g^e*h^f` (exponent omitted
//! when 1) and the empty word is `1`. JSON:
//! `{"generators":[{"name":..,"component":..}],"relators":[[[gen,exp],..],..]}`.

use serde::{Deserialize, Serialize};

use super::presentation::{GeneratorLabel, Presentation};
use super::word::{Gen, Word};
use super::AlgebraError;

pub fn word_to_text(w: &Word, names: &[&str]) -> String {
    if w.is_empty() {
        return "1".to_owned();
    }
    w.runs()
        .iter()
        .map(|&(g, e)| if e == 1 { names[g].to_owned() } else { format!("{}^{}", names[g], e) })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn presentation_to_text(p: &Presentation) -> String {
    let names = p.names();
    let rels: Vec<String> = p.relators().iter().map(|r| word_to_text(r, &names)).collect();
    if rels.is_empty() {
        format!("< {} | >", names.join(", "))
    } else {
        format!("< {} | {} >", names.join(", "), rels.join(", "))
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses `a*b^-2*c`; also accepts `1` for the empty word.
pub fn parse_word(s: &str, names: &[&str]) -> Result<Word, AlgebraError> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Word::empty());
    }
    let mut runs: Vec<(Gen, i64)> = Vec::new();
    for factor in s.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.trim().parse().map_err(|_| AlgebraError::Parse(format!("bad exponent in {factor:?}")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        if name == "1" {
            continue;
        }
        let g = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_owned()))?;
        runs.push((g, exp));
    }
    Ok(Word::from_runs(runs))
}

pub fn parse_presentation(s: &str) -> Result<Presentation, AlgebraError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(|| AlgebraError::Parse("expected < ... | ... >".into()))?;
    let (gens, rels) = inner
        .split_once('|')
        .ok_or_else(|| AlgebraError::Parse("missing '|'".into()))?;
    let names: Vec<&str> = gens.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
        return Err(AlgebraError::Parse(format!("invalid generator name {bad:?}")));
    }
    let relators = rels
        .split(',')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| parse_word(r, &names))
        .collect::<Result<Vec<_>, _>>()?;
    Presentation::new(names.iter().map(|n| GeneratorLabel::plain(*n)).collect(), relators)
}

#[derive(Serialize, Deserialize)]
struct JsonGenerator {
    name: String,
    component: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonPresentation {
    generators: Vec<JsonGenerator>,
    relators: Vec<Vec<(usize, i64)>>,
}

pub fn presentation_to_json(p: &Presentation) -> serde_json::Value {
    let j = JsonPresentation {
        generators: p
            .generators()
            .iter()
            .map(|g| JsonGenerator { name: g.name.clone(), component: g.component.clone() })
            .collect(),
        relators: p.relators().iter().map(|r| r.runs().to_vec()).collect(),
    };
    serde_json::to_value(j).expect("presentation serializes")
}

pub fn presentation_from_json(v: &serde_json::Value) -> Result<Presentation, AlgebraError> {
    let j: JsonPresentation = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
    if j.relators.iter().flatten().any(|(_, e)| *e == 0) {
        return Err(AlgebraError::Parse("zero exponent".into()));
    }
    Presentation::new(
        j.generators
            .into_iter()
            .map(|g| GeneratorLabel { name: g.name, component: g.component, strand: None })
            .collect(),
        j.relators.into_iter().map(Word::from_runs).collect(),
    )
}
