//! Exact rates `K/N`, kept unreduced so the dimension stays visible.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RateRepr", try_from = "RateRepr")]
pub struct Rate {
    num: u64,
    den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!("{num}/{den} is not a rate")));
        }
        Ok(Rate { num, den })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn reduced(&self) -> Ratio<u64> {
        Ratio::new(self.num, self.den)
    }

    pub fn as_ratio(&self) -> Ratio<i128> {
        Ratio::new(self.num as i128, self.den as i128)
    }

    /// Lossy, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `a/b` in lowest terms, e.g. `5/8`.
    pub fn reduced_string(&self) -> String {
        let r = self.reduced();
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidParameter(format!("rate {s:?} is not of the form K/N")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidParameter(format!("rate {s:?}: {e}")))
        };
        Rate::new(parse(a)?, parse(b)?)
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

#[derive(Serialize, Deserialize)]
struct RateRepr {
    unreduced: String,
    reduced: String,
}

impl From<Rate> for RateRepr {
    fn from(r: Rate) -> Self {
        RateRepr {
            unreduced: r.to_string(),
            reduced: r.reduced_string(),
        }
    }
}

impl TryFrom<RateRepr> for Rate {
    type Error = Error;

    fn try_from(repr: RateRepr) -> Result<Self> {
        let rate: Rate = repr.unreduced.parse()?;
        if rate.reduced_string() != repr.reduced {
            return Err(Error::InvalidParameter(format!(
                "reduced form {} does not match {}",
                repr.reduced, repr.unreduced
            )));
        }
        Ok(rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_order() {
        let r = Rate::new(10, 16).unwrap();
        assert_eq!(r.to_string(), "10/16");
        assert_eq!(r.reduced_string(), "5/8");
        assert!(Rate::new(11, 16).unwrap() > r);
        assert_eq!(Rate::new(5, 8).unwrap().cmp(&r), Ordering::Equal);
        assert!(Rate::new(3, 2).is_err());
    }

    #[test]
    fn json_shape() {
        let r = Rate::new(1312, 2048).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"unreduced":"1312/2048","reduced":"41/64"}"#);
        assert_eq!(serde_json::from_str::<Rate>(&s).unwrap(), r);
        assert!(serde_json::from_str::<Rate>(r#"{"unreduced":"2/4","reduced":"2/4"}"#).is_err());
    }
}
