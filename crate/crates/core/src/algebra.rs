//! Linear combinations of subset entropies and the entropic conjugation.
//!
//! An [`EntropyExpression`] stores `φ = Σ λ_a H(X^a)` with exact rational
//! coefficients in canonical sparse form: zero coefficients and the empty
//! subset are never stored, so two expressions are equal exactly when their
//! term maps are equal.
//!
//! Conjugation sends `H(X^a)` to `H(X^{-a}) - H(X)` and extends linearly.
//! Label-symmetric expressions that vanish on independent variables live in
//! the span of the `u_k` averages, and [`to_u_basis`] recovers their
//! coordinates through the average-entropy (`r_k`) basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, binomial, binomial_q, int, Coeff};
use crate::subset::{self, SubsetIndex, MAX_VARIABLES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyExpression {
    n: usize,
    terms: BTreeMap<SubsetIndex, Coeff>,
}

impl EntropyExpression {
    /// The zero expression over `n` variables.
    ///
    /// Panics if `n` exceeds [`MAX_VARIABLES`].
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VARIABLES, "n={n} exceeds {MAX_VARIABLES}");
        EntropyExpression {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `H(X^a)` as an expression.
    pub fn entropy(n: usize, a: SubsetIndex) -> Self {
        let mut e = Self::zero(n);
        e.add_term(a, int(1));
        e
    }

    /// Builds an expression from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetIndex, Coeff)>,
    {
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::invalid(format!("n={n} outside 1..={MAX_VARIABLES}")));
        }
        let mut e = Self::zero(n);
        for (a, c) in terms {
            if !a.fits(n) {
                return Err(Error::invalid(format!("subset {a} not within 1..={n}")));
            }
            e.add_term(a, c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `c · H(X^a)`, keeping canonical form.
    pub fn add_term(&mut self, a: SubsetIndex, c: Coeff) {
        assert!(a.fits(self.n), "subset {a} not within 1..={}", self.n);
        if a.is_empty() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(a).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn coefficient(&self, a: SubsetIndex) -> Coeff {
        self.terms.get(&a).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (SubsetIndex, &Coeff)> {
        self.terms.iter().map(|(a, c)| (*a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of subsets carrying a nonzero coefficient.
    pub fn distinct_term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, factor: &Coeff) -> Self {
        if factor.is_zero() {
            return Self::zero(self.n);
        }
        EntropyExpression {
            n: self.n,
            terms: self.terms.iter().map(|(a, c)| (*a, c * factor)).collect(),
        }
    }

    /// Sum that reports mismatched variable counts instead of panicking.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a, c.clone());
        }
        Ok(out)
    }

    /// The entropic conjugate: each `H(X^a)` becomes `H(X^{-a}) - H(X)`.
    pub fn conjugate(&self) -> Self {
        let full = SubsetIndex::full(self.n);
        let mut out = Self::zero(self.n);
        for (a, c) in self.terms() {
            out.add_term(a.complement(self.n), c.clone());
            out.add_term(full, -c.clone());
        }
        out
    }

    /// The first subset size at which coefficients disagree, if any.
    fn label_symmetry_violation(&self) -> Option<usize> {
        let mut by_size: Vec<Option<Coeff>> = vec![None; self.n + 1];
        let mut counts = vec![0u64; self.n + 1];
        for (a, c) in self.terms() {
            let k = a.len();
            counts[k] += 1;
            match &by_size[k] {
                Some(prev) if prev != c => return Some(k),
                Some(_) => {}
                None => by_size[k] = Some(c.clone()),
            }
        }
        // A size with some but not all subsets present mixes λ and 0.
        (1..=self.n).find(|&k| counts[k] != 0 && counts[k] != binomial(self.n, k))
    }

    /// True iff `λ_a` depends only on `|a|`.
    pub fn is_label_symmetric(&self) -> bool {
        self.label_symmetry_violation().is_none()
    }

    /// Symmetric and skew-symmetric parts `((φ + φ*)/2, (φ - φ*)/2)`.
    pub fn sym_skew_decompose(&self) -> (Self, Self) {
        let conj = self.conjugate();
        let half = rational::half();
        let sym = (self + &conj).scale(&half);
        let skew = (self - &conj).scale(&half);
        (sym, skew)
    }

    pub fn to_json(&self) -> ExpressionJson {
        ExpressionJson {
            n: self.n,
            terms: self
                .terms()
                .map(|(a, c)| TermJson {
                    subset: a.members(),
                    coeff: rational::format_coeff(c),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ExpressionJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            let a = SubsetIndex::from_members(&t.subset, json.n)?;
            terms.push((a, rational::parse_coeff(&t.coeff)?));
        }
        Self::from_terms(json.n, terms)
    }
}

impl fmt::Display for EntropyExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if mag != int(1) {
                write!(f, "{mag}·")?;
            }
            write!(f, "H{a}")?;
        }
        Ok(())
    }
}

impl Add<&EntropyExpression> for &EntropyExpression {
    type Output = EntropyExpression;

    /// Panics when the variable counts differ; see [`EntropyExpression::checked_add`].
    fn add(self, rhs: &EntropyExpression) -> EntropyExpression {
        self.checked_add(rhs)
            .expect("adding expressions over different n")
    }
}

impl Sub<&EntropyExpression> for &EntropyExpression {
    type Output = EntropyExpression;

    fn sub(self, rhs: &EntropyExpression) -> EntropyExpression {
        self + &(-rhs)
    }
}

impl Neg for &EntropyExpression {
    type Output = EntropyExpression;

    fn neg(self) -> EntropyExpression {
        EntropyExpression {
            n: self.n,
            terms: self.terms.iter().map(|(a, c)| (*a, -c.clone())).collect(),
        }
    }
}

impl Add for EntropyExpression {
    type Output = EntropyExpression;
    fn add(self, rhs: EntropyExpression) -> EntropyExpression {
        &self + &rhs
    }
}

impl Sub for EntropyExpression {
    type Output = EntropyExpression;
    fn sub(self, rhs: EntropyExpression) -> EntropyExpression {
        &self - &rhs
    }
}

impl Neg for EntropyExpression {
    type Output = EntropyExpression;
    fn neg(self) -> EntropyExpression {
        -&self
    }
}

impl Mul<&Coeff> for &EntropyExpression {
    type Output = EntropyExpression;
    fn mul(self, rhs: &Coeff) -> EntropyExpression {
        self.scale(rhs)
    }
}

/// On-disk form: `{ "n": 3, "terms": [ { "subset": [1], "coeff": "1/1" } ] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub subset: Vec<usize>,
    pub coeff: String,
}

/// `I(X^a; X^b | X^c) = H(ac) + H(bc) - H(abc) - H(c)`.
pub fn mutual_information_expr(
    n: usize,
    a: SubsetIndex,
    b: SubsetIndex,
    c: SubsetIndex,
) -> Result<EntropyExpression> {
    for (name, s) in [("a", a), ("b", b), ("c", c)] {
        if !s.fits(n) {
            return Err(Error::invalid(format!("{name}={s} not within 1..={n}")));
        }
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("a and b must be nonempty"));
    }
    if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
        return Err(Error::invalid(format!(
            "{a}, {b}, {c} are not pairwise disjoint"
        )));
    }
    let mut e = EntropyExpression::zero(n);
    e.add_term(a.union(c), int(1));
    e.add_term(b.union(c), int(1));
    e.add_term(a.union(b).union(c), int(-1));
    e.add_term(c, int(-1));
    Ok(e)
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if !(2..=MAX_VARIABLES).contains(&n) {
        return Err(Error::invalid(format!("n={n} outside 2..={MAX_VARIABLES}")));
    }
    if k == 0 || k >= n {
        return Err(Error::invalid(format!("k={k} outside 1..={}", n - 1)));
    }
    Ok(())
}

/// `u_k`: the normalized average of `I(X_i; X_j | X^a)` over pairs `i < j`
/// and `(k-1)`-subsets `a` avoiding both.
pub fn u_expression(k: usize, n: usize) -> Result<EntropyExpression> {
    check_k(k, n)?;
    let mut counts: HashMap<u32, i64> = HashMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let pair = SubsetIndex::singleton(i).union(SubsetIndex::singleton(j));
            let rest = pair.complement(n);
            for a in subset::subsets_of_size_within(rest, k - 1) {
                let si = SubsetIndex::singleton(i).union(a);
                let sj = SubsetIndex::singleton(j).union(a);
                *counts.entry(si.mask()).or_default() += 1;
                *counts.entry(sj.mask()).or_default() += 1;
                *counts.entry(pair.union(a).mask()).or_default() -= 1;
                *counts.entry(a.mask()).or_default() -= 1;
            }
        }
    }
    let norm = binomial_q(n, k + 1) * binomial_q(k + 1, 2);
    let terms = counts
        .into_iter()
        .map(|(m, c)| (SubsetIndex::from_mask(m), int(c) / &norm));
    EntropyExpression::from_terms(n, terms)
}

/// `r_k`: the average entropy over all `k`-subsets.
pub fn r_expression(k: usize, n: usize) -> Result<EntropyExpression> {
    if k == 0 || k > n || n > MAX_VARIABLES {
        return Err(Error::invalid(format!("k={k} outside 1..={n}")));
    }
    let w = int(1) / binomial_q(n, k);
    EntropyExpression::from_terms(n, subset::subsets_of_size(n, k).map(|a| (a, w.clone())))
}

/// Coordinates `c_1..c_{n-1}` of a metric in the `u_k` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UBasisVector {
    n: usize,
    c: Vec<Coeff>,
}

impl UBasisVector {
    pub fn new(n: usize, c: Vec<Coeff>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("n={n} must be at least 2")));
        }
        if c.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                found: c.len(),
            });
        }
        Ok(UBasisVector { n, c })
    }

    pub fn from_integers(n: usize, c: &[i64]) -> Result<Self> {
        Self::new(n, c.iter().map(|&v| int(v)).collect())
    }

    /// `e_k`, the coordinate vector of `u_k` itself.
    pub fn unit(k: usize, n: usize) -> Result<Self> {
        check_k(k, n)?;
        let mut c = vec![Coeff::zero(); n - 1];
        c[k - 1] = int(1);
        Ok(UBasisVector { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Coeff] {
        &self.c
    }

    /// `c_k`, 1-based.
    pub fn get(&self, k: usize) -> &Coeff {
        &self.c[k - 1]
    }

    /// Coordinates of the conjugate metric: `c_k ↦ c_{n-k}`.
    pub fn conjugate(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        UBasisVector { n: self.n, c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for UBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Coefficients `a_1..a_n` on the average entropies `r_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RBasisVector {
    a: Vec<Coeff>,
}

impl RBasisVector {
    /// Collapses a label-symmetric expression: `a_k = λ_k · C(n,k)`.
    fn from_expression(e: &EntropyExpression) -> Result<Self> {
        if let Some(size) = e.label_symmetry_violation() {
            return Err(Error::NotLabelSymmetric { size });
        }
        let n = e.n();
        let mut a = vec![Coeff::zero(); n];
        for (s, c) in e.terms() {
            a[s.len() - 1] = c * binomial_q(n, s.len());
        }
        Ok(RBasisVector { a })
    }

    /// Solves `a_j = 2c_j - c_{j-1} - c_{j+1}` (with `c_0 = c_n = 0`) from
    /// the top row down, then checks the leftover equation at `j = 1`.
    fn to_u(&self) -> Result<UBasisVector> {
        let n = self.a.len();
        let mut c = vec![Coeff::zero(); n + 1];
        c[n - 1] = -self.a[n - 1].clone();
        for j in (2..n).rev() {
            c[j - 1] = int(2) * &c[j] - &c[j + 1] - &self.a[j - 1];
        }
        let residual = &self.a[0] - (int(2) * &c[1] - &c[2]);
        if !residual.is_zero() {
            return Err(Error::NotInSpan { residual });
        }
        UBasisVector::new(n, c[1..n].to_vec())
    }
}

/// Coordinates of a label-symmetric, dependency-respecting expression in the
/// `u_k` basis. Expressions outside the span are rejected, never projected.
pub fn to_u_basis(e: &EntropyExpression) -> Result<UBasisVector> {
    if e.n() < 2 {
        return Err(Error::invalid("the u-basis needs n >= 2"));
    }
    RBasisVector::from_expression(e)?.to_u()
}

/// `Σ c_k u_k` expanded into entropy terms.
pub fn from_u_basis(c: &UBasisVector) -> EntropyExpression {
    let mut out = EntropyExpression::zero(c.n);
    for (i, ck) in c.c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let u = u_expression(i + 1, c.n).expect("k in range by construction");
        out = &out + &u.scale(ck);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryClass {
    Symmetric,
    SkewSymmetric,
    Neither,
}

impl SymmetryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::SkewSymmetric => "skew-symmetric",
            SymmetryClass::Neither => "neither",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Symmetric iff `c_k = c_{n-k}`, skew iff `c_k = -c_{n-k}`. Zero is symmetric.
pub fn classify(c: &UBasisVector) -> SymmetryClass {
    let m = c.c.len();
    let mirrored = |k: usize| &c.c[m - 1 - k];
    if (0..m).all(|k| &c.c[k] == mirrored(k)) {
        SymmetryClass::Symmetric
    } else if (0..m).all(|k| c.c[k] == -mirrored(k).clone()) {
        SymmetryClass::SkewSymmetric
    } else {
        SymmetryClass::Neither
    }
}

/// `Σ_k c1_k · c2_k`, the inner product making the `u_k` orthonormal.
pub fn u_inner_product(c1: &UBasisVector, c2: &UBasisVector) -> Result<Coeff> {
    if c1.n != c2.n {
        return Err(Error::DimensionMismatch {
            expected: c1.n,
            found: c2.n,
        });
    }
    Ok(c1.c.iter().zip(&c2.c).map(|(x, y)| x * y).sum())
}

/// `(⌊n/2⌋, ⌊(n-1)/2⌋)`: dimensions of the symmetric and skew subspaces.
pub fn span_dimensions(n: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::invalid(format!("n={n} must be at least 2")));
    }
    Ok((n / 2, (n - 1) / 2))
}
