use thiserror::Error;

use crate::conllu::ParseError;
use crate::model::CorefError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{}: {}", .source.line, .source.kind)]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Coref(#[from] CorefError),
    /// Key and response documents do not correspond.
    #[error("{0}")]
    Pairing(String),
}
