//! Exact continued-fraction arithmetic and the dimension theory of sets of
//! irrationals whose strictly increasing partial quotients carry prescribed
//! arithmetic progressions.
//!
//! The crate has three layers:
//!
//! - [`cf`] and [`seqspec`]: exact convergents, fundamental intervals, the
//!   Gauss map, rational expansion, and a small expression language for
//!   sequence definitions like `nu(n) = 2*n`.
//! - [`ap`] and [`lambda`]: AP detection in digit sequences, membership
//!   scans for the F- and G-families, and the constructive Cantor-type
//!   subsets with their exact cylinder measures.
//! - [`bounds`]: series inequalities, covering certificates, and the
//!   closed-form dimension values `1/(2(1+alpha))` and `(beta-1)/(2 beta)`,
//!   bracketed numerically from both sides.
//!
//! Start with the runnable programs in `examples/`; each one exercises a
//! single capability end to end. The `cfdim` binary exposes the same
//! operations as subcommands with machine-readable output.

pub mod ap;
pub mod bounds;
pub mod cf;
pub mod cli;
pub mod lambda;
pub mod logs;
pub mod report;
pub mod seqspec;
pub mod verify;
