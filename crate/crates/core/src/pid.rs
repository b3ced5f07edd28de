//! Partial information decomposition atoms and their order duality.
//!
//! An atom is identified by a nonconstant monotone Boolean function over
//! subsets of sources, stored as a truth table indexed by source mask. The
//! equivalent antichain form lists the minimal sets on which the function is 1.
//!
//! [`reference_pid`] assigns numbers to atoms with the minimum specific
//! information redundancy and Möbius inversion. It exists to check the
//! measure-independent duality results numerically on small systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::{conditional_mutual_information, JointDistribution};
use crate::error::{Error, Result};
use crate::subset::{full_mask, SubsetIndex};

/// Largest source count for lattice enumeration.
pub const MAX_ENUMERATION_SOURCES: usize = 5;

/// Largest source count for the numeric reference decomposition.
pub const MAX_NUMERIC_SOURCES: usize = 3;

/// Truth table of a monotone Boolean function on `P({1..n})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneBooleanFunction {
    n: usize,
    table: u64,
}

impl MonotoneBooleanFunction {
    /// Validates monotonicity and nonconstancy.
    pub fn from_table(n: usize, table: u64) -> Result<Self> {
        if n == 0 || n > MAX_ENUMERATION_SOURCES {
            return Err(Error::invalid(format!(
                "source count {n} outside 1..={MAX_ENUMERATION_SOURCES}"
            )));
        }
        let size = 1u32 << n;
        let all = if size == 64 {
            u64::MAX
        } else {
            (1u64 << size) - 1
        };
        if table & !all != 0 {
            return Err(Error::invalid("truth table has bits beyond 2^n"));
        }
        if table == 0 || table == all {
            return Err(Error::invalid("constant Boolean function"));
        }
        let f = MonotoneBooleanFunction { n, table };
        if !f.is_monotone() {
            return Err(Error::invalid("Boolean function is not monotone"));
        }
        Ok(f)
    }

    fn is_monotone(&self) -> bool {
        (0..1u32 << self.n)
            .all(|m| !self.eval_mask(m) || (0..self.n).all(|i| self.eval_mask(m | (1 << i))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> u64 {
        self.table
    }

    fn eval_mask(&self, mask: u32) -> bool {
        self.table >> mask & 1 == 1
    }

    pub fn eval(&self, a: SubsetIndex) -> bool {
        self.eval_mask(a.mask())
    }

    /// Table bits as a `0`/`1` string in mask order.
    pub fn table_string(&self) -> String {
        (0..1u32 << self.n)
            .map(|m| if self.eval_mask(m) { '1' } else { '0' })
            .collect()
    }

    /// The lattice order `f ⊑ g`: wherever `g` is 1, `f` is 1 too.
    pub fn precedes(&self, other: &Self) -> bool {
        self.n == other.n && other.table & !self.table == 0
    }

    /// `f†(a) = 1` iff `f(a^C) = 0`.
    pub fn dual(&self) -> Self {
        let full = full_mask(self.n);
        let mut table = 0u64;
        for m in 0..=full {
            if !self.eval_mask(!m & full) {
                table |= 1 << m;
            }
        }
        MonotoneBooleanFunction { n: self.n, table }
    }

    /// Minimal sets on which the function is 1.
    pub fn to_antichain(&self) -> Antichain {
        let sets = (0..1u32 << self.n)
            .filter(|&m| {
                self.eval_mask(m)
                    && (0..self.n).all(|i| m & (1 << i) == 0 || !self.eval_mask(m & !(1 << i)))
            })
            .map(SubsetIndex::from_mask)
            .collect();
        Antichain { sets }
    }
}

impl fmt::Display for MonotoneBooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_antichain())
    }
}

/// Pairwise incomparable, nonempty source sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Antichain {
    sets: Vec<SubsetIndex>,
}

impl Antichain {
    pub fn new(sets: Vec<SubsetIndex>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::invalid("empty antichain"));
        }
        let mut sets: Vec<SubsetIndex> = sets
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        sets.sort();
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::invalid("antichain contains the empty source set"));
        }
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if a.is_subset_of(*b) || b.is_subset_of(*a) {
                    return Err(Error::invalid(format!("{a} and {b} are comparable")));
                }
            }
        }
        Ok(Antichain { sets })
    }

    /// From 1-based source lists such as `[[1,2],[1,3]]`.
    pub fn from_lists(lists: &[Vec<usize>], n: usize) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| SubsetIndex::from_members(l, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets)
    }

    pub fn sets(&self) -> &[SubsetIndex] {
        &self.sets
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.members()).collect()
    }

    /// `f(a) = 1` iff some member set is contained in `a`.
    pub fn to_boolean_function(&self, n: usize) -> Result<MonotoneBooleanFunction> {
        if let Some(s) = self.sets.iter().find(|s| !s.fits(n)) {
            return Err(Error::invalid(format!("{s} not within 1..={n}")));
        }
        let mut table = 0u64;
        for m in 0..=full_mask(n) {
            let a = SubsetIndex::from_mask(m);
            if self.sets.iter().any(|s| s.is_subset_of(a)) {
                table |= 1 << m;
            }
        }
        MonotoneBooleanFunction::from_table(n, table)
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(""))
    }
}

pub fn antichain_to_bf(alpha: &Antichain, n: usize) -> Result<MonotoneBooleanFunction> {
    alpha.to_boolean_function(n)
}

pub fn bf_to_antichain(f: &MonotoneBooleanFunction) -> Antichain {
    f.to_antichain()
}

pub fn dual(f: &MonotoneBooleanFunction) -> MonotoneBooleanFunction {
    f.dual()
}

fn check_sources(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_SOURCES {
        return Err(Error::invalid(format!(
            "source count {n} outside 1..={MAX_ENUMERATION_SOURCES}"
        )));
    }
    Ok(())
}

/// Every monotone table on `n` variables, including the two constants.
///
/// A monotone `f` splits on the top variable into `g ≤ h` on `n - 1` variables,
/// with `g` filling the low half of the table and `h` the high half.
fn monotone_tables(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let lower = monotone_tables(n - 1);
    let shift = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &g in &lower {
        for &h in &lower {
            if g & !h == 0 {
                out.push(g | (h << shift));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All nonconstant monotone Boolean functions on `n` sources, by table value.
pub fn enumerate_atoms(n: usize) -> Result<Vec<MonotoneBooleanFunction>> {
    check_sources(n)?;
    let size = 1u32 << n;
    let all = if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    };
    Ok(monotone_tables(n)
        .into_iter()
        .filter(|&t| t != 0 && t != all)
        .map(|table| MonotoneBooleanFunction { n, table })
        .collect())
}

fn check_pair(a: SubsetIndex, b: SubsetIndex, n: usize) -> Result<()> {
    check_sources(n)?;
    if !(a.fits(n) && b.fits(n)) {
        return Err(Error::invalid(format!("{a} or {b} not within 1..={n}")));
    }
    if a.is_empty() {
        return Err(Error::invalid("a must be nonempty"));
    }
    if !a.is_disjoint(b) {
        return Err(Error::invalid(format!("{a} and {b} overlap")));
    }
    Ok(())
}

/// Atoms making up `I(X^a; Y | X^b)`: `f(a ∪ b) = 1` and `f(b) = 0`.
pub fn cmi_atom_set(
    a: SubsetIndex,
    b: SubsetIndex,
    n: usize,
) -> Result<BTreeSet<MonotoneBooleanFunction>> {
    check_pair(a, b, n)?;
    let ab = a.union(b);
    Ok(enumerate_atoms(n)?
        .into_iter()
        .filter(|f| f.eval(ab) && !f.eval(b))
        .collect())
}

/// Structural check that the duals of the atoms of `I(X^a;Y|X^b)` are exactly
/// the atoms of `I(X^a;Y|X^{(a∪b)^C})`.
pub fn verify_theorem1_sets(a: SubsetIndex, b: SubsetIndex, n: usize) -> Result<bool> {
    let duals: BTreeSet<_> = cmi_atom_set(a, b, n)?.iter().map(|f| f.dual()).collect();
    let target = cmi_atom_set(a, a.union(b).complement(n), n)?;
    Ok(duals == target)
}

/// Numeric values of every atom of one decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct PidAtomValues {
    n: usize,
    values: Vec<(MonotoneBooleanFunction, f64)>,
}

impl PidAtomValues {
    pub fn sources(&self) -> usize {
        self.n
    }

    /// Atoms and values in enumeration order.
    pub fn iter(&self) -> impl Iterator<Item = (&MonotoneBooleanFunction, f64)> {
        self.values.iter().map(|(f, v)| (f, *v))
    }

    pub fn get(&self, f: &MonotoneBooleanFunction) -> Option<f64> {
        self.values.iter().find(|(g, _)| g == f).map(|(_, v)| *v)
    }

    /// `Σ_{f(a)=1} value(f)`, which must reproduce `I(X^a; Y)`.
    pub fn cumulative(&self, a: SubsetIndex) -> f64 {
        self.iter().filter(|(f, _)| f.eval(a)).map(|(_, v)| v).sum()
    }

    /// Value of a linear combination of atoms.
    pub fn combine(&self, combination: &[(MonotoneBooleanFunction, f64)]) -> f64 {
        combination
            .iter()
            .map(|(f, c)| c * self.get(f).unwrap_or(0.0))
            .sum()
    }
}

/// The dagger of a linear combination: each atom replaced by its dual.
pub fn dagger(
    combination: &[(MonotoneBooleanFunction, f64)],
) -> Vec<(MonotoneBooleanFunction, f64)> {
    combination.iter().map(|(f, c)| (f.dual(), *c)).collect()
}

/// Joint pmf of (sources restricted to a mask, target), with specific information.
struct SpecificInformation {
    /// `p(y)` by target symbol.
    target: Vec<f64>,
    /// `I(Y = y; X^A)` by source mask, then target symbol.
    by_mask: BTreeMap<u32, Vec<f64>>,
}

impl SpecificInformation {
    fn new(d: &JointDistribution, sources: usize) -> Self {
        let ny = d.alphabet_sizes()[sources];
        let mut target = vec![0.0; ny];
        for (s, p) in d.iter() {
            target[s[sources] as usize] += p;
        }
        let mut by_mask = BTreeMap::new();
        for mask in 1..=full_mask(sources) {
            let mut joint: BTreeMap<(Vec<u32>, u32), f64> = BTreeMap::new();
            let mut marg: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (s, p) in d.iter() {
                let x: Vec<u32> = (0..sources)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| s[i])
                    .collect();
                *marg.entry(x.clone()).or_default() += p;
                *joint.entry((x, s[sources])).or_default() += p;
            }
            let mut spec = vec![0.0; ny];
            for ((x, y), pxy) in &joint {
                let py = target[*y as usize];
                if *pxy <= 0.0 || py <= 0.0 {
                    continue;
                }
                let px = marg[x];
                // p(x|y) · log2( p(x,y) / (p(x) p(y)) )
                spec[*y as usize] += pxy / py * (pxy / (px * py)).log2();
            }
            by_mask.insert(mask, spec);
        }
        SpecificInformation { target, by_mask }
    }

    /// Minimum specific information over the member sets of `alpha`.
    fn redundancy(&self, alpha: &Antichain) -> f64 {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, &py)| py > 0.0)
            .map(|(y, &py)| {
                let min = alpha
                    .sets()
                    .iter()
                    .map(|s| self.by_mask[&s.mask()][y])
                    .fold(f64::INFINITY, f64::min);
                py * min
            })
            .sum()
    }
}

fn source_count(d: &JointDistribution) -> Result<usize> {
    let sources = d.n().saturating_sub(1);
    if sources == 0 || sources > MAX_NUMERIC_SOURCES {
        return Err(Error::invalid(format!(
            "reference PID needs 1..={MAX_NUMERIC_SOURCES} sources plus a target, got {} variables",
            d.n()
        )));
    }
    Ok(sources)
}

/// Reference decomposition of `I(X; Y)`, with `Y` the last variable of `d`.
pub fn reference_pid(d: &JointDistribution) -> Result<PidAtomValues> {
    let n = source_count(d)?;
    let atoms = enumerate_atoms(n)?;
    let spec = SpecificInformation::new(d, n);
    // Strict upper cone of f is every g with more 1s covering f's 1s; process
    // atoms with the most 1s first so the cone is already solved.
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(atoms[i].table.count_ones()));
    let mut values = vec![0.0; atoms.len()];
    for &i in &order {
        let f = atoms[i];
        let above: f64 = atoms
            .iter()
            .enumerate()
            .filter(|(_, g)| g.table != f.table && f.table & !g.table == 0)
            .map(|(j, _)| values[j])
            .sum();
        values[i] = spec.redundancy(&f.to_antichain()) - above;
    }
    Ok(PidAtomValues {
        n,
        values: atoms.into_iter().zip(values).collect(),
    })
}

/// Both sides of the PID conjugation identity for the given source sets:
/// the summed dual-atom values over the atoms of `I(X^a;Y|X^b)`, and
/// `I(X^a; Y | X^{(a∪b)^C})` computed directly from entropies.
pub fn pid_conjugate_check(
    d: &JointDistribution,
    a: SubsetIndex,
    b: SubsetIndex,
) -> Result<(f64, f64)> {
    let n = source_count(d)?;
    let atoms = cmi_atom_set(a, b, n)?;
    let pid = reference_pid(d)?;
    let lhs = atoms
        .iter()
        .map(|f| pid.get(&f.dual()).expect("dual of an atom is an atom"))
        .sum();
    let target = SubsetIndex::singleton(n + 1);
    let rest = a.union(b).complement(n);
    let rhs = conditional_mutual_information(d, a, target, rest)?;
    Ok((lhs, rhs))
}

/// JSON form: `{ "antichain": [[1,2],[1,3]], "table": "0001...", "value": 0.5 }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub antichain: Vec<Vec<usize>>,
    pub table: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
}

impl AtomJson {
    pub fn new(f: &MonotoneBooleanFunction, value: Option<f64>) -> Self {
        AtomJson {
            antichain: f.to_antichain().to_lists(),
            table: f.table_string(),
            value,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(members: &[usize], n: usize) -> SubsetIndex {
        SubsetIndex::from_members(members, n).unwrap()
    }

    fn ac(lists: &[&[usize]], n: usize) -> MonotoneBooleanFunction {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Antichain::from_lists(&lists, n)
            .unwrap()
            .to_boolean_function(n)
            .unwrap()
    }

    /// Brute-force filter over every table, independent of the recursive generator.
    fn brute_force_count(n: usize) -> usize {
        let size = 1u32 << n;
        (1u64..(1u64 << size) - 1)
            .filter(|&t| MonotoneBooleanFunction::from_table(n, t).is_ok())
            .count()
    }

    #[test]
    fn atom_counts() {
        assert_eq!(enumerate_atoms(1).unwrap().len(), 1);
        assert_eq!(enumerate_atoms(2).unwrap().len(), 4);
        assert_eq!(enumerate_atoms(3).unwrap().len(), 18);
        assert_eq!(brute_force_count(3), 18);
        assert_eq!(brute_force_count(2), 4);
        assert!(enumerate_atoms(0).is_err());
        assert!(enumerate_atoms(6).is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let atoms = enumerate_atoms(4).unwrap();
        assert!(atoms.windows(2).all(|w| w[0].table < w[1].table));
        assert!(atoms.iter().all(|f| f.is_monotone()));
    }

    #[test]
    fn synergy_table() {
        let f = ac(&[&[1, 2]], 2);
        assert_eq!(f.table_string(), "0001");
    }

    #[test]
    fn all_but_empty_is_the_singleton_antichain() {
        for n in 1..=4 {
            let all = (1u64 << (1u32 << n)) - 1;
            let f = MonotoneBooleanFunction::from_table(n, all & !1).unwrap();
            let singletons: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
            assert_eq!(f.to_antichain().to_lists(), singletons);
        }
    }

    #[test]
    fn antichain_validation() {
        assert!(Antichain::new(vec![]).is_err());
        assert!(Antichain::from_lists(&[vec![1], vec![1, 2]], 2).is_err());
        assert!(Antichain::from_lists(&[vec![]], 2).is_err());
        assert!(Antichain::from_lists(&[vec![3]], 2).is_err());
        assert!(MonotoneBooleanFunction::from_table(2, 0).is_err());
        assert!(MonotoneBooleanFunction::from_table(2, 0b1111).is_err());
        // f({1}) = 1 but f({1,2}) = 0
        assert!(MonotoneBooleanFunction::from_table(2, 0b0010).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(ac(&[&[1, 2]], 2).dual(), ac(&[&[1], &[2]], 2));
        assert_eq!(ac(&[&[1, 2], &[1, 3]], 3).dual(), ac(&[&[1], &[2, 3]], 3));
        assert_eq!(ac(&[&[1]], 2).dual(), ac(&[&[1]], 2));
        assert_eq!(ac(&[&[2]], 2).dual(), ac(&[&[2]], 2));
    }

    #[test]
    fn cmi_atom_set_examples() {
        let all = cmi_atom_set(s(&[1, 2], 2), SubsetIndex::EMPTY, 2).unwrap();
        assert_eq!(all.len(), 4);
        let unique = cmi_atom_set(s(&[1], 2), s(&[2], 2), 2).unwrap();
        let expected: BTreeSet<_> = [ac(&[&[1]], 2), ac(&[&[1, 2]], 2)].into_iter().collect();
        assert_eq!(unique, expected);
        assert_eq!(
            cmi_atom_set(s(&[1], 1), SubsetIndex::EMPTY, 1)
                .unwrap()
                .len(),
            1
        );
        assert!(cmi_atom_set(s(&[1], 2), s(&[1], 2), 2).is_err());
        assert!(cmi_atom_set(SubsetIndex::EMPTY, s(&[1], 2), 2).is_err());
    }

    #[test]
    fn theorem1_sets_small() {
        assert!(verify_theorem1_sets(s(&[1], 2), s(&[2], 2), 2).unwrap());
    }

    fn bits(states: &[[u32; 3]]) -> JointDistribution {
        JointDistribution::from_weights(vec![2; 3], states.iter().map(|s| (s.to_vec(), 1.0)))
            .unwrap()
    }

    #[test]
    fn xor_is_pure_synergy() {
        let d = bits(&[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let pid = reference_pid(&d).unwrap();
        let syn = ac(&[&[1, 2]], 2);
        for (f, v) in pid.iter() {
            let expected = if *f == syn { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "{f}: {v}");
        }
    }

    #[test]
    fn copy_is_pure_redundancy() {
        let d = bits(&[[0, 0, 0], [1, 1, 1]]);
        let pid = reference_pid(&d).unwrap();
        let red = ac(&[&[1], &[2]], 2);
        for (f, v) in pid.iter() {
            let expected = if *f == red { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "{f}: {v}");
        }
    }

    #[test]
    fn independent_target_has_zero_atoms() {
        let d = JointDistribution::uniform(vec![2, 2, 2]).unwrap();
        assert!(reference_pid(&d)
            .unwrap()
            .iter()
            .all(|(_, v)| v.abs() < 1e-12));
        let constant = JointDistribution::from_weights(
            vec![2, 2, 1],
            [(vec![0, 0, 0], 0.5), (vec![1, 1, 0], 0.5)],
        )
        .unwrap();
        assert!(reference_pid(&constant)
            .unwrap()
            .iter()
            .all(|(_, v)| v.abs() < 1e-12));
    }

    #[test]
    fn conjugate_check_examples() {
        let xor = bits(&[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let (l, r) = pid_conjugate_check(&xor, s(&[1], 2), SubsetIndex::EMPTY).unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let copy = bits(&[[0, 0, 0], [1, 1, 1]]);
        let (l, r) = pid_conjugate_check(&copy, s(&[1], 2), SubsetIndex::EMPTY).unwrap();
        assert!(l.abs() < 1e-12 && r.abs() < 1e-12);
    }

    #[test]
    fn dagger_flips_redundancy_minus_synergy() {
        let combo = vec![(ac(&[&[1], &[2]], 2), 1.0), (ac(&[&[1, 2]], 2), -1.0)];
        let copy = reference_pid(&bits(&[[0, 0, 0], [1, 1, 1]])).unwrap();
        let xor = reference_pid(&bits(&[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])).unwrap();
        for pid in [copy, xor] {
            let v = pid.combine(&combo);
            assert!((pid.combine(&dagger(&combo)) + v).abs() < 1e-12);
        }
    }

    #[test]
    fn too_many_sources_rejected() {
        let d = JointDistribution::uniform(vec![2; 5]).unwrap();
        assert!(reference_pid(&d).is_err());
        let d = JointDistribution::uniform(vec![2]).unwrap();
        assert!(reference_pid(&d).is_err());
    }

    #[test]
    fn atom_json_layout() {
        let f = ac(&[&[1, 2], &[1, 3]], 3);
        let json = serde_json::to_string(&AtomJson::new(&f, Some(0.5))).unwrap();
        assert_eq!(
            json,
            r#"{"antichain":[[1,2],[1,3]],"table":"00010101","value":0.5}"#
        );
    }
}
