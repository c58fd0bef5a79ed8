use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Named code families with their integer parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CodeFamilyId {
    /// `[n, 1]` repetition code, `n ≥ 1`.
    Repetition(usize),
    /// Extended Hamming code of length `2^m`, `m ≥ 2`.
    ExtendedHamming(usize),
    /// Extended Hamming parity checks of length `2^{r−1}` plus a zero column
    /// and a weight-2 row, `r ≥ 3`.
    AugmentedHr(usize),
    /// The `[23, 12, 7]` binary Golay code.
    Golay23,
    /// Two-error-correcting BCH code of length `2^s − 1`, `s ≥ 3`.
    Bch2(u32),
    /// Parity checks are evaluations of all linear and quadratic monomials
    /// on the nonzero points of F₂^m, `m ≥ 3`.
    RmQuadratic(usize),
    FromFile(PathBuf),
}

impl CodeFamilyId {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            CodeFamilyId::Repetition(n) if n < 1 => bad(format!("repetition length {n} < 1")),
            // 2^m columns must stay addressable and below the coset-graph cap.
            CodeFamilyId::ExtendedHamming(m) if !(2..=25).contains(&m) => {
                bad(format!("extended Hamming m = {m} outside 2..=25"))
            }
            CodeFamilyId::AugmentedHr(r) if !(3..=25).contains(&r) => {
                bad(format!("augmented H_r needs 3 <= r <= 25, got {r}"))
            }
            CodeFamilyId::Bch2(s) if !(3..=16).contains(&s) => {
                bad(format!("BCH extension degree {s} outside 3..=16"))
            }
            CodeFamilyId::RmQuadratic(m) if !(3..=10).contains(&m) => {
                bad(format!("quadratic RM parameter m = {m} outside 3..=10"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CodeFamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeFamilyId::Repetition(n) => write!(f, "repetition:{n}"),
            CodeFamilyId::ExtendedHamming(m) => write!(f, "ext-hamming:{m}"),
            CodeFamilyId::AugmentedHr(r) => write!(f, "augmented-hr:{r}"),
            CodeFamilyId::Golay23 => write!(f, "golay23"),
            CodeFamilyId::Bch2(s) => write!(f, "bch2:{s}"),
            CodeFamilyId::RmQuadratic(m) => write!(f, "rm-quadratic:{m}"),
            CodeFamilyId::FromFile(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for CodeFamilyId {
    type Err = Error;

    /// Accepts `name:param` with the names printed by `Display`, plus a few
    /// aliases (`rep`, `hamming`, `hr`, `bch`, `rm`, `golay`).
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let num = |what: &str| -> Result<usize> {
            param
                .ok_or_else(|| Error::InvalidParameter(format!("{what} needs a parameter")))?
                .parse::<usize>()
                .map_err(|e| Error::InvalidParameter(format!("bad {what} parameter: {e}")))
        };
        let id = match name.to_ascii_lowercase().as_str() {
            "repetition" | "rep" => CodeFamilyId::Repetition(num("repetition")?),
            "ext-hamming" | "hamming" | "extended-hamming" => {
                CodeFamilyId::ExtendedHamming(num("ext-hamming")?)
            }
            "augmented-hr" | "hr" => CodeFamilyId::AugmentedHr(num("augmented-hr")?),
            "golay23" | "golay" => CodeFamilyId::Golay23,
            "bch2" | "bch" => CodeFamilyId::Bch2(num("bch2")? as u32),
            "rm-quadratic" | "rm" => CodeFamilyId::RmQuadratic(num("rm-quadratic")?),
            "file" => CodeFamilyId::FromFile(PathBuf::from(param.ok_or_else(|| {
                Error::InvalidParameter("file family needs a path".into())
            })?)),
            other => return Err(Error::InvalidParameter(format!("unknown code family {other:?}"))),
        };
        id.validate()?;
        Ok(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["repetition:5", "ext-hamming:3", "augmented-hr:4", "golay23", "bch2:7", "rm-quadratic:4"] {
            let id: CodeFamilyId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("bch2:2".parse::<CodeFamilyId>().is_err());
        assert!("repetition:0".parse::<CodeFamilyId>().is_err());
        assert!("nope:3".parse::<CodeFamilyId>().is_err());
    }
}
