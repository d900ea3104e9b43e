use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, ParseError, Result};
use crate::rational::{fmt_rational, int, parse_rational, Rational};

/// A smooth projective curve, seen only through its genus and the degree
/// of `O(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveData {
    pub g: u64,
    pub deg_y: u64,
}

impl CurveData {
    pub fn new(g: u64, deg_y: u64) -> Result<Self> {
        if deg_y == 0 {
            return Err(Error::InvalidCurve("degY must be positive".into()));
        }
        Ok(CurveData { g, deg_y })
    }

    pub fn projective_line() -> Self {
        CurveData { g: 0, deg_y: 1 }
    }

    /// Plane curve of degree `d`: genus `(d-1)(d-2)/2`, `deg O(1) = d`.
    pub fn plane_curve(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidCurve("plane curve degree must be positive".into()));
        }
        Self::new((d - 1) * d.saturating_sub(2) / 2, d)
    }

    /// `deg ω = 2g - 2`.
    pub fn deg_omega(&self) -> i64 {
        2 * self.g as i64 - 2
    }

    pub fn deg_y_q(&self) -> Rational {
        int(self.deg_y)
    }

    /// `g=<int>,degY=<int>`, keys in any order.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut g = None;
        let mut deg_y = None;
        let mut col = 1;
        for part in text.split(',') {
            let lead = part.len() - part.trim_start().len();
            let Some((k, v)) = part.split_once('=') else {
                return Err(ParseError::new(col + lead, "expected key=value"));
            };
            let vcol = col + k.len() + 1;
            let val: u64 = v.trim().parse().map_err(|_| {
                ParseError::new(vcol, format!("expected a nonnegative integer, found '{}'", v.trim()))
            })?;
            match k.trim() {
                "g" => g = Some(val),
                "degY" => deg_y = Some(val),
                other => {
                    return Err(ParseError::new(col + lead, format!("unknown curve key '{other}'")))
                }
            }
            col += part.len() + 1;
        }
        let end = text.len() + 1;
        let g = g.ok_or_else(|| ParseError::new(end, "missing g"))?;
        let deg_y = deg_y.ok_or_else(|| ParseError::new(end, "missing degY"))?;
        if deg_y == 0 {
            return Err(ParseError::new(end, "degY must be positive"));
        }
        Ok(CurveData { g, deg_y })
    }
}

impl fmt::Display for CurveData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={},degY={}", self.g, self.deg_y)
    }
}

/// One Harder-Narasimhan quotient: rank and normalised slope `μ̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNQuotient {
    pub rank: u64,
    pub mubar: Rational,
}

/// Strong Harder-Narasimhan data, slopes strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNData {
    quotients: Vec<HNQuotient>,
}

impl HNData {
    pub fn new(quotients: Vec<HNQuotient>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::InvalidInput("HN data needs at least one quotient".into()));
        }
        if let Some(q) = quotients.iter().find(|q| q.rank == 0) {
            return Err(Error::InvalidInput(format!(
                "quotient of slope {} has rank 0",
                fmt_rational(&q.mubar)
            )));
        }
        if quotients.windows(2).any(|w| w[0].mubar <= w[1].mubar) {
            return Err(Error::InvalidInput(
                "HN slopes must be strictly decreasing".into(),
            ));
        }
        Ok(HNData { quotients })
    }

    pub fn from_pairs(pairs: &[(u64, Rational)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(r, m)| HNQuotient {
                    rank: *r,
                    mubar: m.clone(),
                })
                .collect(),
        )
    }

    /// `rank:num/den` pairs separated by `;`, e.g. `2:-9/2;1:-6`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut quotients = Vec::new();
        let mut col = 1;
        for part in text.split(';') {
            let lead = part.len() - part.trim_start().len();
            let Some((r, m)) = part.split_once(':') else {
                return Err(ParseError::new(col + lead, "expected rank:slope"));
            };
            let rank: u64 = r.trim().parse().map_err(|_| {
                ParseError::new(col + lead, format!("expected a rank, found '{}'", r.trim()))
            })?;
            if rank == 0 {
                return Err(ParseError::new(col + lead, "rank must be positive"));
            }
            let mcol = col + r.len() + 1;
            let mubar = parse_rational(m).map_err(|mut e| {
                e.column += mcol - 1;
                e
            })?;
            if let Some(prev) = quotients.last() {
                let prev: &HNQuotient = prev;
                if prev.mubar <= mubar {
                    return Err(ParseError::new(mcol, "slopes must be strictly decreasing"));
                }
            }
            quotients.push(HNQuotient { rank, mubar });
            col += part.len() + 1;
        }
        Ok(HNData { quotients })
    }

    pub fn quotients(&self) -> &[HNQuotient] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.quotients.iter().map(|q| q.rank).sum()
    }

    /// `Σ r_k μ̄_k`.
    pub fn degree(&self) -> Rational {
        self.quotients
            .iter()
            .fold(Rational::zero(), |acc, q| acc + int(q.rank) * &q.mubar)
    }

    /// `ν_k = -μ̄_k / degY`, increasing in `k`.
    pub fn nus(&self, curve: &CurveData) -> Vec<Rational> {
        self.quotients
            .iter()
            .map(|q| -&q.mubar / int(curve.deg_y))
            .collect()
    }
}

impl fmt::Display for HNData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .quotients
            .iter()
            .map(|q| format!("{}:{}", q.rank, fmt_rational(&q.mubar)))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

pub(crate) fn to_i64(n: &BigInt, what: &str) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::InvalidRange(format!("{what} does not fit in 64 bits")))
}
