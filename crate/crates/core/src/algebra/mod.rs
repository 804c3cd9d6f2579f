//! Free-group words and finitely presented groups.

mod format;
mod free_product;
mod presentation;
mod simplify;
mod smith;
mod word;

use thiserror::Error;

pub use format::{
    parse_presentation, parse_word, presentation_from_json, presentation_to_json, presentation_to_text, word_to_text,
};
pub use free_product::{free_product_reduce, Factor, FreeProduct, FreeProductElement};
pub use presentation::{
    kill_generator, normalize_presentation, same_by_names, solve_for, tietze_eliminate, tietze_eliminate_solved,
    tietze_introduce, GeneratorLabel, Presentation,
};
pub use simplify::{
    find_consequence, replay_derivation, ConsequenceStatus, DerivationStep, Meridian, RelRef, SearchLimits, SimplifyError,
    Simplifier, Step, StepRecord,
};
pub use smith::{abelianization, smith_normal_form, AbelianInvariants, IntegerMatrix, SmithForm};
pub use word::{free_reduce, word_build, Gen, Word, WordBuild};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("relator {relator} uses generator {gen} but only {count} generators exist")]
    GeneratorOutOfRange { relator: usize, gen: usize, count: usize },
    #[error("no relator with index {0}")]
    RelatorOutOfRange(usize),
    #[error("generator {generator} does not occur exactly once with exponent +-1 in relator {relator}")]
    NotEliminable { generator: String, relator: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator sets differ")]
    GeneratorMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}
