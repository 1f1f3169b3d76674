//! Reading, writing and scoring CorefUD coreference annotation.
//!
//! ```
//! use corefud::conllu::parse_str;
//! use corefud::metrics::{evaluate, DatasetInput, EvalOptions, Metric};
//!
//! let text = "1\tDogs\tdog\tNOUN\t_\t_\t2\tnsubj\t_\tEntity=(e1)\n\
//!             2\tbark\tbark\tVERB\t_\t_\t0\troot\t_\t_\n\
//!             3\tthey\tthey\tPRON\t_\t_\t2\tdep\t_\tEntity=(e1)\n\n";
//! let corpus = parse_str(text).unwrap();
//! let input = DatasetInput { name: "toy", key: &corpus, response: &corpus };
//! let report = evaluate(&[input], &EvalOptions::default()).unwrap();
//! assert_eq!(report.macro_avg[&Metric::Conll].f1, 1.0);
//! ```

pub mod align;
pub mod assignment;
pub mod baselines;
pub mod conllu;
mod error;
pub mod heads;
pub mod metrics;
pub mod model;
pub mod stats;
pub mod transforms;

pub use error::Error;
