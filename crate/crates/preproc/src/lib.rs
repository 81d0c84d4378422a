//! Untrusted transformations on certificates. Nothing here is relied on
//! by the kernel: a wrong output can only make a certificate fail to check.

mod compact;
mod linearize;
mod nested;
mod trust;

pub use compact::compact;
pub use linearize::{linearize, LinearizeError};
pub use nested::{parse_nested, print_nested, NestedProof, Premise};
pub use trust::{extract_trust, TrustEntry, TrustReport};
