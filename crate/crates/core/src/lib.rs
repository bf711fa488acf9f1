//! Taylor's-law fluctuation scaling for word sequences.
//!
//! A text is cut into segments of `dt` tokens; each word's per-segment counts
//! give a mean `mu` and standard deviation `sigma`, and the exponent `alpha`
//! of `sigma ∝ mu^alpha` is fitted by least squares in log-log coordinates.
//! An i.i.d. sequence gives `alpha = 0.5`; words that always co-occur in fixed
//! proportions push it toward 1.
//!
//! ```
//! use taylor_core::corpus::{tokenize, TokenizerConfig};
//! use taylor_core::taylor::taylor_analysis;
//!
//! let text = "the whale the sea a ship the whale sank a sea ".repeat(50);
//! let seq = tokenize(&text, &TokenizerConfig::default()).unwrap();
//! let (moments, fit) = taylor_analysis(&seq, 7).unwrap();
//! assert_eq!(moments.num_segments, seq.len() / 7);
//! assert!(fit.alpha.is_finite());
//! ```

pub mod baseline;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod export;
pub mod stats;
pub mod taylor;

pub use corpus::{TokenSequence, TokenizerConfig, TokenizerMode};
pub use error::{Error, ErrorKind, Result};
pub use taylor::{TaylorFit, WordMoments, DEFAULT_DT};
