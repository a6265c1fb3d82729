use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("0 has no factorization")]
    ZeroNotFactorable,
    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: u64, m: u64 },
    #[error("{g} does not generate the coprime group mod {m}")]
    NotAGenerator { g: u64, m: u64 },
    #[error("modulus {0} is below 3")]
    ModulusTooSmall(u64),
    #[error("empty level set (sigma_j0 = 0)")]
    EmptyLevelSet,
    #[error("spectrum set is not symmetric")]
    NotSymmetric,
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
}
