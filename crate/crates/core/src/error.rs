use thiserror::Error;

/// Quantity whose denominator collapsed during an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degenerate {
    /// g = γ − δ of the closed-form cascade.
    G,
    /// T(k, μ, a, b), the denominator of β.
    T,
    /// U(k, μ, β, a, b), the denominator of γ.
    U,
    /// 2Jₗ(μa) + πaJₗ(ka)U, the denominator of δ.
    DeltaDenominator,
    JKb,
    JKa,
    /// g = γ − δ of the interface-matched coefficients (a true pole of G).
    MatchedG,
    MatchedAlpha,
    MatchedBeta,
    MatchedGamma,
    MatchedDelta,
}

impl Degenerate {
    pub fn name(self) -> &'static str {
        match self {
            Degenerate::G => "g",
            Degenerate::T => "T",
            Degenerate::U => "U",
            Degenerate::DeltaDenominator => "delta_denominator",
            Degenerate::JKb => "J_l(kb)",
            Degenerate::JKa => "J_l(ka)",
            Degenerate::MatchedG => "matched_g",
            Degenerate::MatchedAlpha => "matched_alpha",
            Degenerate::MatchedBeta => "matched_beta",
            Degenerate::MatchedGamma => "matched_gamma",
            Degenerate::MatchedDelta => "matched_delta",
        }
    }
}

impl std::fmt::Display for Degenerate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Bessel argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("Bessel order {0} is outside |l| <= 200")]
    OrderOutOfRange(i32),
    #[error("Bessel evaluation overflows at order {order}, argument {x}")]
    ArgumentOverflow { order: i32, x: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("invalid potential profile: {0}")]
    InvalidProfile(String),
    #[error("energy {e} does not exceed the barrier height {v0} (diffusion regime requires E > V0)")]
    NotDiffusionRegime { e: f64, v0: f64 },
    #[error("near a pole: {0} is degenerate")]
    NearPole(Degenerate),
    #[error("r and r' lie in different regions ({0} and {1}); only same-region blocks exist")]
    CrossRegionUnsupported(&'static str, &'static str),
    #[error("partial-wave sum did not converge by l = {0}")]
    NoConvergence(i32),
    #[error("degenerate scan range: kmax ({kmax}) must exceed kmin ({kmin})")]
    DegenerateRange { kmin: f64, kmax: f64 },
    #[error("ODE step failure at r = {0}")]
    StepFailure(f64),
    #[error("oracle Wronskian is degenerate at r' = {0}")]
    WronskianDegenerate(f64),
    #[error("the two forms of delta disagree: {simplified} vs {gamma_form}")]
    InconsistentDelta { simplified: f64, gamma_form: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Numerical degeneracy rather than bad input or a logic fault.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NearPole(_)
                | Error::WronskianDegenerate(_)
                | Error::NoConvergence(_)
                | Error::StepFailure(_)
                | Error::ArgumentOverflow { .. }
        )
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InconsistentDelta { .. } => 4,
            e if e.is_degenerate() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
