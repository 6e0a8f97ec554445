//! Benchmarks for `steklov-core`; see `benches/`.

use steklov_core::DomainSpec;

/// Domains shared by the benchmarks.
pub fn sample_domains() -> Vec<(&'static str, DomainSpec)> {
    vec![
        ("disk", DomainSpec::disk(1.0)),
        ("ellipse", DomainSpec::ellipse(1.6, 0.625)),
    ]
}
