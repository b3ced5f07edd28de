//! Exact discrete joint distributions and plug-in entropy evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::EntropyExpression;
use crate::error::{Error, Result};
use crate::rational::{binomial, to_f64};
use crate::subset::{self, full_mask, SubsetIndex, MAX_VARIABLES};

/// Tolerance on the total probability mass accepted at ingestion.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Probabilities below this are treated as zero.
pub const ZERO_PROBABILITY: f64 = 1e-15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    #[default]
    Two,
    /// Nats.
    E,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

/// A probability mass function over a finite product alphabet.
///
/// Immutable once built. Only states with positive mass are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    alphabet_sizes: Vec<usize>,
    pmf: BTreeMap<Vec<u32>, f64>,
}

impl JointDistribution {
    /// Validates and renormalizes an explicit pmf.
    ///
    /// Duplicate states are rejected; the mass must sum to 1 within `tolerance`.
    pub fn new<I>(alphabet_sizes: Vec<usize>, entries: I, tolerance: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        check_alphabet(&alphabet_sizes)?;
        let mut pmf = BTreeMap::new();
        let mut sum = 0.0;
        for (state, p) in entries {
            check_state(&state, &alphabet_sizes)?;
            if !p.is_finite() || p < 0.0 {
                return Err(Error::invalid(format!(
                    "probability {p} for state {state:?}"
                )));
            }
            sum += p;
            if pmf.insert(state.clone(), p).is_some() {
                return Err(Error::invalid(format!("duplicate state {state:?}")));
            }
        }
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::Normalization { sum, tolerance });
        }
        Ok(Self::normalized(alphabet_sizes, pmf, sum))
    }

    /// Builds a distribution from nonnegative weights, normalizing by their total.
    pub fn from_weights<I>(alphabet_sizes: Vec<usize>, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        check_alphabet(&alphabet_sizes)?;
        let mut pmf: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (state, w) in weights {
            check_state(&state, &alphabet_sizes)?;
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(format!("weight {w} for state {state:?}")));
            }
            total += w;
            *pmf.entry(state).or_default() += w;
        }
        if total <= 0.0 {
            return Err(Error::invalid("weights sum to zero"));
        }
        Ok(Self::normalized(alphabet_sizes, pmf, total))
    }

    fn normalized(alphabet_sizes: Vec<usize>, pmf: BTreeMap<Vec<u32>, f64>, total: f64) -> Self {
        let mut pmf: BTreeMap<Vec<u32>, f64> = pmf
            .into_iter()
            .map(|(s, p)| (s, p / total))
            .filter(|(_, p)| *p >= ZERO_PROBABILITY)
            .collect();
        let kept: f64 = pmf.values().sum();
        for p in pmf.values_mut() {
            *p /= kept;
        }
        JointDistribution {
            alphabet_sizes,
            pmf,
        }
    }

    /// Uniform distribution over the full product alphabet.
    pub fn uniform(alphabet_sizes: Vec<usize>) -> Result<Self> {
        check_alphabet(&alphabet_sizes)?;
        let states = all_states(&alphabet_sizes);
        Self::from_weights(alphabet_sizes, states.into_iter().map(|s| (s, 1.0)))
    }

    /// Reads `x1,...,xn,p` rows with explicit probabilities.
    pub fn from_csv<R: Read>(reader: R, tolerance: f64) -> Result<Self> {
        let (rows, lines) = read_rows(reader, true)?;
        let alphabet = infer_alphabet(&rows);
        let mut seen: HashMap<&[u32], u64> = HashMap::new();
        for ((state, _), line) in rows.iter().zip(&lines) {
            if let Some(prev) = seen.insert(state.as_slice(), *line) {
                return Err(Error::input(
                    Some(*line),
                    format!("state {state:?} already given at line {prev}"),
                ));
            }
        }
        Self::new(
            alphabet,
            rows.into_iter().map(|(s, p)| (s, p.unwrap_or(0.0))),
            tolerance,
        )
    }

    /// Reads `x1,...,xn` observation rows; probabilities are empirical frequencies.
    pub fn from_samples<R: Read>(reader: R) -> Result<Self> {
        let (rows, _) = read_rows(reader, false)?;
        let rows: Vec<Vec<u32>> = rows.into_iter().map(|(s, _)| s).collect();
        Self::from_sample_rows(&rows)
    }

    pub fn from_sample_rows(rows: &[Vec<u32>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input(None, "no observations"));
        }
        let alphabet = infer_alphabet_states(rows.iter().map(Vec::as_slice));
        Self::from_weights(alphabet, rows.iter().map(|r| (r.clone(), 1.0)))
    }

    pub fn from_csv_path(path: &Path, tolerance: f64) -> Result<Self> {
        Self::from_csv(open(path)?, tolerance)
    }

    pub fn from_samples_path(path: &Path) -> Result<Self> {
        Self::from_samples(open(path)?)
    }

    pub fn n(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    /// States with positive mass, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.pmf.iter().map(|(s, p)| (s.as_slice(), *p))
    }

    pub fn probability(&self, state: &[u32]) -> f64 {
        self.pmf.get(state).copied().unwrap_or(0.0)
    }

    /// Marginal pmf of variable `i` (1-based).
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        let mut m = vec![0.0; self.alphabet_sizes[i - 1]];
        for (s, p) in self.iter() {
            m[s[i - 1] as usize] += p;
        }
        m
    }

    /// Shannon entropy of the marginal on `a`.
    pub fn subset_entropy(&self, a: SubsetIndex, base: LogBase) -> Result<f64> {
        if !a.fits(self.n()) {
            return Err(Error::invalid(format!(
                "subset {a} not within 1..={}",
                self.n()
            )));
        }
        Ok(self.marginal_entropy(a.mask(), base))
    }

    fn marginal_entropy(&self, mask: u32, base: LogBase) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        let vars: Vec<usize> = (0..self.n()).filter(|b| mask & (1 << b) != 0).collect();
        // Ordered accumulation keeps the floating-point sums reproducible.
        let mut marg: BTreeMap<u64, f64> = BTreeMap::new();
        for (s, p) in self.iter() {
            let mut key = 0u64;
            for &v in &vars {
                key = key * self.alphabet_sizes[v] as u64 + s[v] as u64;
            }
            *marg.entry(key).or_default() += p;
        }
        entropy_of(marg.values().copied(), base)
    }

    /// All `2^n` subset entropies, indexed by mask.
    pub fn entropy_table(&self, base: LogBase) -> EntropyTable {
        let n = self.n();
        let values = (0..=full_mask(n))
            .map(|m| self.marginal_entropy(m, base))
            .collect();
        EntropyTable { n, base, values }
    }

    /// The independent distribution with the same single-variable marginals.
    pub fn product_of_marginals(&self) -> JointDistribution {
        let marginals: Vec<Vec<f64>> = (1..=self.n()).map(|i| self.marginal(i)).collect();
        let weights = all_states(&self.alphabet_sizes).into_iter().map(|s| {
            let p = s
                .iter()
                .zip(&marginals)
                .map(|(&x, m)| m[x as usize])
                .product::<f64>();
            (s, p)
        });
        Self::from_weights(self.alphabet_sizes.clone(), weights)
            .expect("product of valid marginals is a valid distribution")
    }

    /// Largest absolute pointwise difference to another pmf on the same alphabet.
    pub fn max_abs_difference(&self, other: &JointDistribution) -> f64 {
        let mut diff: f64 = 0.0;
        for (s, p) in self.iter() {
            diff = diff.max((p - other.probability(s)).abs());
        }
        for (s, p) in other.iter() {
            diff = diff.max((p - self.probability(s)).abs());
        }
        diff
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check_alphabet(alphabet_sizes: &[usize]) -> Result<()> {
    let n = alphabet_sizes.len();
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::invalid(format!("n={n} outside 1..={MAX_VARIABLES}")));
    }
    if alphabet_sizes.contains(&0) {
        return Err(Error::invalid("alphabet sizes must be positive"));
    }
    alphabet_sizes
        .iter()
        .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64))
        .ok_or_else(|| Error::invalid("joint alphabet too large"))?;
    Ok(())
}

fn check_state(state: &[u32], alphabet_sizes: &[usize]) -> Result<()> {
    if state.len() != alphabet_sizes.len() {
        return Err(Error::invalid(format!(
            "state {state:?} has {} symbols, expected {}",
            state.len(),
            alphabet_sizes.len()
        )));
    }
    if let Some(i) = (0..state.len()).find(|&i| state[i] as usize >= alphabet_sizes[i]) {
        return Err(Error::invalid(format!(
            "symbol {} of variable {} exceeds alphabet size {}",
            state[i],
            i + 1,
            alphabet_sizes[i]
        )));
    }
    Ok(())
}

fn all_states(alphabet_sizes: &[usize]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(alphabet_sizes.len())];
    for &size in alphabet_sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..size as u32).map(move |x| {
                    let mut s = prefix.clone();
                    s.push(x);
                    s
                })
            })
            .collect();
    }
    out
}

fn infer_alphabet(rows: &[(Vec<u32>, Option<f64>)]) -> Vec<usize> {
    infer_alphabet_states(rows.iter().map(|(s, _)| s.as_slice()))
}

fn infer_alphabet_states<'a>(rows: impl Iterator<Item = &'a [u32]>) -> Vec<usize> {
    let mut sizes: Vec<usize> = Vec::new();
    for s in rows {
        if sizes.is_empty() {
            sizes = vec![1; s.len()];
        }
        for (size, &x) in sizes.iter_mut().zip(s) {
            *size = (*size).max(x as usize + 1);
        }
    }
    sizes
}

type Rows = (Vec<(Vec<u32>, Option<f64>)>, Vec<u64>);

/// Parses the header and data rows. With `with_p`, the last column is `p`.
fn read_rows<R: Read>(reader: R, with_p: bool) -> Result<Rows> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Error::input(Some(1), e.to_string()))?
        .clone();
    let width = header.len();
    let n = if with_p {
        if header.get(width - 1) != Some("p") {
            return Err(Error::input(Some(1), "last header column must be `p`"));
        }
        width - 1
    } else {
        width
    };
    if n == 0 {
        return Err(Error::input(Some(1), "no variable columns"));
    }
    for (i, name) in header.iter().take(n).enumerate() {
        if name != format!("x{}", i + 1) {
            return Err(Error::input(
                Some(1),
                format!(
                    "header column {} is {name:?}, expected \"x{}\"",
                    i + 1,
                    i + 1
                ),
            ));
        }
    }
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line());
            Error::input(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(Error::input(
                Some(line),
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let state = record
            .iter()
            .take(n)
            .map(|f| {
                f.parse::<u32>().map_err(|_| {
                    Error::input(
                        Some(line),
                        format!("unknown symbol {f:?}: expected a nonnegative integer"),
                    )
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        let p = if with_p {
            let f = &record[n];
            let p: f64 = f
                .parse()
                .map_err(|_| Error::input(Some(line), format!("invalid probability {f:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::input(
                    Some(line),
                    format!("probability {p} outside [0,1]"),
                ));
            }
            Some(p)
        } else {
            None
        };
        rows.push((state, p));
        lines.push(line);
    }
    if rows.is_empty() {
        return Err(Error::input(None, "no data rows"));
    }
    Ok((rows, lines))
}

fn entropy_of(probs: impl Iterator<Item = f64>, base: LogBase) -> f64 {
    let h: f64 = probs
        .filter(|&p| p >= ZERO_PROBABILITY)
        .map(|p| -p * base.log(p))
        .sum();
    // Clamp round-off on point masses.
    h.max(0.0)
}

/// Memoized entropies of every subset of one distribution.
#[derive(Clone, Debug)]
pub struct EntropyTable {
    n: usize,
    base: LogBase,
    values: Vec<f64>,
}

impl EntropyTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn entropy(&self, a: SubsetIndex) -> f64 {
        self.values[a.mask() as usize]
    }

    /// `I(X^a; X^b | X^c)` from the table.
    pub fn cmi(&self, a: SubsetIndex, b: SubsetIndex, c: SubsetIndex) -> f64 {
        self.entropy(a.union(c)) + self.entropy(b.union(c))
            - self.entropy(a.union(b).union(c))
            - self.entropy(c)
    }

    /// `Σ λ_a H(X^a)` with coefficients converted to floats.
    pub fn evaluate(&self, e: &EntropyExpression) -> Result<f64> {
        if e.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: e.n(),
            });
        }
        Ok(e.terms().map(|(a, c)| to_f64(c) * self.entropy(a)).sum())
    }

    /// The `u_k` averages of conditional mutual informations.
    pub fn u_values(&self) -> Result<UValues> {
        let n = self.n;
        if n < 2 {
            return Err(Error::invalid("u-values need at least two variables"));
        }
        let mut values = Vec::with_capacity(n - 1);
        for k in 1..n {
            let mut total = 0.0;
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let xi = SubsetIndex::singleton(i);
                    let xj = SubsetIndex::singleton(j);
                    let rest = xi.union(xj).complement(n);
                    for a in subset::subsets_of_size_within(rest, k - 1) {
                        total += self.cmi(xi, xj, a);
                    }
                }
            }
            let norm = (binomial(n, k + 1) * binomial(k + 1, 2)) as f64;
            values.push(total / norm);
        }
        Ok(UValues {
            n,
            base: self.base,
            values,
        })
    }
}

/// Evaluated `u_1..u_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UValues {
    pub n: usize,
    pub base: LogBase,
    pub values: Vec<f64>,
}

impl UValues {
    /// `u_k`, 1-based.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// Subset entropy in bits.
pub fn subset_entropy(d: &JointDistribution, a: SubsetIndex) -> Result<f64> {
    d.subset_entropy(a, LogBase::Two)
}

/// `u_k` values in bits.
pub fn u_values(d: &JointDistribution) -> Result<UValues> {
    d.entropy_table(LogBase::Two).u_values()
}

/// Evaluates an expression in bits.
pub fn evaluate(e: &EntropyExpression, d: &JointDistribution) -> Result<f64> {
    if e.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: e.n(),
        });
    }
    d.entropy_table(LogBase::Two).evaluate(e)
}

/// `I(X^a; X^b | X^c)` in bits.
pub fn conditional_mutual_information(
    d: &JointDistribution,
    a: SubsetIndex,
    b: SubsetIndex,
    c: SubsetIndex,
) -> Result<f64> {
    let n = d.n();
    if !(a.fits(n) && b.fits(n) && c.fits(n)) {
        return Err(Error::invalid(format!("subsets must lie within 1..={n}")));
    }
    let h = |s: SubsetIndex| d.marginal_entropy(s.mask(), LogBase::Two);
    Ok(h(a.union(c)) + h(b.union(c)) - h(a.union(b).union(c)) - h(c))
}

/// Common test and demo distributions over bits.
pub mod examples {
    use super::JointDistribution;

    /// `X1, X2` uniform and independent, `X3 = X1 xor X2`.
    pub fn xor_triple() -> JointDistribution {
        let states = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
        JointDistribution::from_weights(vec![2; 3], states.iter().map(|s| (s.to_vec(), 1.0)))
            .expect("valid")
    }

    /// `X1 = X2 = X3`, a uniform bit.
    pub fn copy_triple() -> JointDistribution {
        let states = [[0, 0, 0], [1, 1, 1]];
        JointDistribution::from_weights(vec![2; 3], states.iter().map(|s| (s.to_vec(), 1.0)))
            .expect("valid")
    }

    /// `n` uniform bits whose overall parity is even: every `n-1` of them are independent.
    pub fn parity(n: usize) -> JointDistribution {
        let states = (0u32..1 << n)
            .filter(|s| s.count_ones() % 2 == 0)
            .map(|s| (0..n).map(|b| (s >> b) & 1).collect::<Vec<u32>>());
        JointDistribution::from_weights(vec![2; n], states.map(|s| (s, 1.0))).expect("valid")
    }
}
