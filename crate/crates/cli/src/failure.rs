use std::fmt;

use padic_tube::{DimsError, Error, IfsError, PadicError, ZetaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Validation,
    Numerical,
    Io,
}

/// A failed run: the module that raised it, a message and a hint.
#[derive(Debug, Clone)]
pub struct Failure {
    pub kind: Kind,
    pub module: &'static str,
    pub message: String,
    pub hint: Option<&'static str>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Usage,
            module: "cli",
            message: message.into(),
            hint: Some("see `padic-tube --help`"),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Io,
            module: "cli",
            message: message.into(),
            hint: None,
        }
    }

    pub fn code(&self) -> u8 {
        match self.kind {
            Kind::Usage => 2,
            Kind::Validation => 3,
            Kind::Numerical => 4,
            Kind::Io => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error [{}]: {}", self.module, self.message)?;
        if let Some(hint) = self.hint {
            write!(f, "\n  hint: {hint}")?;
        }
        Ok(())
    }
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        let (kind, hint) = match e {
            PadicError::NotPrime(_) => (Kind::Usage, "the field Q_p needs a prime p"),
            PadicError::NotIntegral(_) => (
                Kind::Validation,
                "translations must have denominators prime to p",
            ),
            PadicError::BallSyntax(_) => (Kind::Usage, "write balls as c+p^nZp, e.g. 1+3^1Z3"),
            PadicError::PrimeMismatch(..) => (Kind::Validation, "use a single prime throughout"),
        };
        Self {
            kind,
            module: "padic",
            message: e.to_string(),
            hint: Some(hint),
        }
    }
}

impl From<IfsError> for Failure {
    fn from(e: IfsError) -> Self {
        let (kind, hint) = match &e {
            IfsError::Padic(inner) => return inner.clone().into(),
            IfsError::RationalSyntax(_) => {
                (Kind::Usage, "write rationals as an integer or num/den")
            }
            IfsError::TooFewMaps(_) => (Kind::Validation, "give at least two --map A:B"),
            IfsError::MixedPrimes(..) => (Kind::Validation, "use a single prime throughout"),
            IfsError::NotContraction { .. } => (
                Kind::Validation,
                "the coefficient a needs a positive power of p",
            ),
            IfsError::TranslationNotIntegral { .. } => (
                Kind::Validation,
                "translations must have denominators prime to p",
            ),
            IfsError::RatioSumTooLarge(_) => (
                Kind::Validation,
                "disjoint images need ratios summing below 1; raise some exponents",
            ),
            IfsError::Overlap { .. } => (
                Kind::Validation,
                "choose translations that put the images in disjoint balls",
            ),
            IfsError::InvalidLattice(_) => (
                Kind::Validation,
                "lattice data must satisfy sum r^n + sum r^m = 1 with positive exponents",
            ),
        };
        Self {
            kind,
            module: "ifs",
            message: e.to_string(),
            hint: Some(hint),
        }
    }
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        let hint = match e {
            ZetaError::Pole { .. } => "evaluate away from the complex dimensions",
            ZetaError::Overflow(_) => "raise --precision",
            ZetaError::Invalid(_) => "the denominator must have constant term 1",
        };
        Self {
            kind: Kind::Numerical,
            module: "zeta",
            message: e.to_string(),
            hint: Some(hint),
        }
    }
}

impl From<DimsError> for Failure {
    fn from(e: DimsError) -> Self {
        let (kind, hint) = match e {
            DimsError::NoConvergence { .. } | DimsError::Uncertified(_) => (
                Kind::Numerical,
                "raise --precision (or PADIC_TUBE_PRECISION)",
            ),
            DimsError::NotSimple(_)
            | DimsError::NotPole
            | DimsError::ZeroRoot
            | DimsError::Constant => (
                Kind::Validation,
                "this quantity is only defined for a simple real dominant pole",
            ),
        };
        Self {
            kind,
            module: "dims",
            message: e.to_string(),
            hint: Some(hint),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Padic(e) => e.into(),
            Error::Ifs(e) => e.into(),
            Error::Zeta(e) => e.into(),
            Error::Dims(e) => e.into(),
        }
    }
}
