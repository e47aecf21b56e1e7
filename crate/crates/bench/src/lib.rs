//! Fixtures shared by the benchmarks.

use formal_schubert::ring::Ring;
use formal_schubert::root_system::{LatticeKind, RootDatum};
use formal_schubert::{Context, ContextBuilder, FglSpec};

pub const LAWS: [&str; 3] = ["additive", "multiplicative", "lorentz"];

pub fn law(name: &str) -> FglSpec {
    match name {
        "additive" => FglSpec::Additive,
        "multiplicative" => FglSpec::Multiplicative(Ring::Integers.one()),
        "lorentz" => FglSpec::Lorentz,
        other => panic!("unknown law {other}"),
    }
}

/// Adjoint context over the integers at the default truncation.
pub fn context(label: &str, law_name: &str) -> Context {
    let rd = RootDatum::from_dynkin(label, LatticeKind::Adjoint).expect("valid label");
    ContextBuilder::new(rd, Ring::Integers, law(law_name)).build().expect("context builds")
}
