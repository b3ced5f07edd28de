//! The six named interdependence metrics, both as definitional entropy
//! expansions and as closed-form `u_k` coordinates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{classify, EntropyExpression, SymmetryClass, UBasisVector};
use crate::error::{Error, Result};
use crate::rational::{binomial, binomial_q, int, ratio, Coeff};
use crate::subset::{self, SubsetIndex, MAX_VARIABLES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    /// Total correlation.
    Tc,
    /// Dual total correlation.
    Dtc,
    /// Tononi-Sporns-Edelman complexity.
    Tse,
    /// Interaction information.
    Ii,
    /// O-information.
    OInfo,
    /// S-information.
    SInfo,
}

impl MetricName {
    pub const ALL: [MetricName; 6] = [
        MetricName::Tc,
        MetricName::Dtc,
        MetricName::Tse,
        MetricName::Ii,
        MetricName::OInfo,
        MetricName::SInfo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::Tc => "tc",
            MetricName::Dtc => "dtc",
            MetricName::Tse => "tse",
            MetricName::Ii => "ii",
            MetricName::OInfo => "oinfo",
            MetricName::SInfo => "sinfo",
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricName::ALL
            .into_iter()
            .find(|m| m.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown metric {s:?} (expected one of tc, dtc, tse, ii, oinfo, sinfo)"
                ))
            })
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_VARIABLES).contains(&n) {
        return Err(Error::invalid(format!("n={n} outside 2..={MAX_VARIABLES}")));
    }
    Ok(())
}

/// How the middle layer of the TSE sum is read for even `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TseReading {
    /// Each bipartition `{a, -a}` counted once: the `k = n/2` layer is halved.
    UnorderedBipartitions,
    /// The literal sum over `|a| = n/2`, counting each bipartition twice.
    OrderedSubsets,
}

/// TSE complexity under an explicit reading of the middle layer.
pub fn tse_expression(n: usize, reading: TseReading) -> Result<EntropyExpression> {
    check_n(n)?;
    let full = SubsetIndex::full(n);
    let mut e = EntropyExpression::zero(n);
    for k in 1..=n / 2 {
        let mut w = int(1) / binomial_q(n, k);
        if reading == TseReading::UnorderedBipartitions && 2 * k == n {
            w /= int(2);
        }
        for a in subset::subsets_of_size(n, k) {
            // I(X^a; X^{-a}) = H(a) + H(-a) - H(X)
            e.add_term(a, w.clone());
            e.add_term(a.complement(n), w.clone());
            e.add_term(full, -w.clone());
        }
    }
    Ok(e)
}

/// Definitional expansion of a metric into subset entropies.
pub fn metric_expression(m: MetricName, n: usize) -> Result<EntropyExpression> {
    check_n(n)?;
    let full = SubsetIndex::full(n);
    let nn = n as i64;
    let mut e = EntropyExpression::zero(n);
    match m {
        MetricName::Ii => {
            for k in 1..=n {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                for a in subset::subsets_of_size(n, k) {
                    e.add_term(a, int(sign));
                }
            }
        }
        MetricName::Tc => {
            for j in 1..=n {
                e.add_term(SubsetIndex::singleton(j), int(1));
            }
            e.add_term(full, int(-1));
        }
        MetricName::Dtc => {
            // H(X) - Σ_j [H(X) - H(X^{-j})]
            e.add_term(full, int(1));
            for j in 1..=n {
                e.add_term(full, int(-1));
                e.add_term(SubsetIndex::singleton(j).complement(n), int(1));
            }
        }
        MetricName::Tse => return tse_expression(n, TseReading::UnorderedBipartitions),
        MetricName::OInfo => {
            e.add_term(full, int(nn - 2));
            for j in 1..=n {
                e.add_term(SubsetIndex::singleton(j), int(1));
                e.add_term(SubsetIndex::singleton(j).complement(n), int(-1));
            }
        }
        MetricName::SInfo => {
            for j in 1..=n {
                e.add_term(SubsetIndex::singleton(j), int(1));
                e.add_term(SubsetIndex::singleton(j).complement(n), int(1));
                e.add_term(full, int(-1));
            }
        }
    }
    Ok(e)
}

/// Closed-form `u_k` coordinates of each metric.
pub fn metric_u_coefficients(m: MetricName, n: usize) -> Result<UBasisVector> {
    check_n(n)?;
    let nn = n as i64;
    let c: Vec<Coeff> = (1..n)
        .map(|k| {
            let kk = k as i64;
            match m {
                MetricName::Tc => int(nn - kk),
                MetricName::Dtc => int(kk),
                MetricName::Tse => ratio(kk * (nn - kk), 2),
                MetricName::SInfo => int(nn),
                MetricName::OInfo => int(nn - 2 * kk),
                MetricName::Ii => {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    int(sign * binomial(n - 2, k - 1) as i64)
                }
            }
        })
        .collect();
    UBasisVector::new(n, c)
}

/// Behaviour of a metric under conjugation.
pub fn metric_conjugation_class(m: MetricName, n: usize) -> Result<SymmetryClass> {
    Ok(classify(&metric_u_coefficients(m, n)?))
}
