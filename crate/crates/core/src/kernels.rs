//! Finite-state Markov kernels.
//!
//! A kernel is a row-stochastic matrix together with a stationary
//! distribution `m`. Entries below [`EPS_ZERO`] are snapped to exact zero at
//! construction, after which every structural question (reachability,
//! irreducibility, deterministic sets, strict irreducibility) is answered on
//! the zero pattern alone. States with `m(y) = 0` never take part in an
//! analysis.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::{self, DisjointSets};
use crate::partition::{Partition, StateSet};

/// Entries below this are structural zeros.
pub const EPS_ZERO: f64 = 1e-12;
/// Tolerance for row sums and stationarity.
pub const EPS_SUM: f64 = 1e-9;
/// Largest block count for which [`deterministic_sets`] lists every union.
pub const MAX_ENUM_BLOCKS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("state space is empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {index} = {value} is not a probability")]
    InvalidEntry { index: usize, value: f64 },
    #[error("entry ({row}, {col}) = {value} is not a probability")]
    InvalidMatrixEntry { row: usize, col: usize, value: f64 },
    #[error("probabilities sum to 1 + {deviation:e}")]
    NotNormalized { deviation: f64 },
    #[error("row {row} is not stochastic: sum deviates from 1 by {deviation:e}")]
    RowNotStochastic { row: usize, deviation: f64 },
    #[error("distribution is not invariant: max deviation {0:e}")]
    NotInvariant(f64),
    #[error("state {from} has positive mass but moves to null state {to}")]
    SupportNotClosed { from: usize, to: usize },
    #[error("kernel has {0} closed classes, so the stationary distribution is not unique")]
    MultipleStationary(usize),
    #[error("strict irreducibility characterizations disagree: {0}")]
    InternalInconsistency(String),
}

/// A probability vector with an exact support.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    values: Vec<f64>,
    support: Vec<usize>,
}

impl ProbVector {
    /// Snaps entries below [`EPS_ZERO`] to zero, checks the sum against
    /// [`EPS_SUM`] and renormalizes.
    pub fn new(values: Vec<f64>) -> Result<Self, KernelError> {
        if values.is_empty() {
            return Err(KernelError::Empty);
        }
        let (values, sum) = snap(values).map_err(|(index, value)| KernelError::InvalidEntry { index, value })?;
        if (sum - 1.0).abs() > EPS_SUM {
            return Err(KernelError::NotNormalized { deviation: sum - 1.0 });
        }
        Ok(Self::normalized(values, sum))
    }

    /// Point mass at `i` in dimension `n`.
    pub fn point_mass(n: usize, i: usize) -> Self {
        let mut values = vec![0.0; n];
        values[i] = 1.0;
        ProbVector { values, support: vec![i] }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        ProbVector {
            values: vec![1.0 / n as f64; n],
            support: (0..n).collect(),
        }
    }

    fn normalized(mut values: Vec<f64>, sum: f64) -> Self {
        for v in values.iter_mut() {
            *v /= sum;
        }
        let support = values.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(i, _)| i).collect();
        ProbVector { values, support }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices with strictly positive value, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, i: usize) -> bool {
        self.values.get(i).is_some_and(|&v| v > 0.0)
    }

    pub fn mass<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> f64 {
        set.into_iter().map(|&i| self.values[i]).sum()
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Snaps tiny entries to zero and returns the sum, or the first bad entry.
fn snap(mut values: Vec<f64>) -> Result<(Vec<f64>, f64), (usize, f64)> {
    let mut sum = 0.0;
    for (i, v) in values.iter_mut().enumerate() {
        if !v.is_finite() || *v <= -EPS_ZERO || *v > 1.0 + EPS_SUM {
            return Err((i, *v));
        }
        if *v < EPS_ZERO {
            *v = 0.0;
        }
        sum += *v;
    }
    Ok((values, sum))
}

/// A row-stochastic matrix with its zero pattern cached as successor lists.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    rows: Vec<ProbVector>,
}

impl StochasticMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, KernelError> {
        let n = rows.len();
        if n == 0 {
            return Err(KernelError::Empty);
        }
        let mut out = Vec::with_capacity(n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::DimensionMismatch { expected: n, found: row.len() });
            }
            let (row, sum) =
                snap(row).map_err(|(col, value)| KernelError::InvalidMatrixEntry { row: r, col, value })?;
            if (sum - 1.0).abs() > EPS_SUM {
                return Err(KernelError::RowNotStochastic { row: r, deviation: sum - 1.0 });
            }
            out.push(ProbVector::normalized(row, sum));
        }
        Ok(StochasticMatrix { rows: out })
    }

    /// Builds from nonnegative rows that are only proportional to
    /// probability vectors; each row is divided by its sum.
    pub(crate) fn from_unnormalized_rows(rows: Vec<Vec<f64>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|row| {
                let (row, sum) = snap(row).expect("unnormalized row has a bad entry");
                assert!(sum > 0.0, "row has no mass");
                ProbVector::normalized(row, sum)
            })
            .collect();
        StochasticMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        StochasticMatrix {
            rows: (0..n).map(|i| ProbVector::point_mass(n, i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].values[j]
    }

    pub fn row(&self, i: usize) -> &ProbVector {
        &self.rows[i]
    }

    /// States reachable from `i` in one step.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.rows[i].support
    }

    pub fn is_positive(&self, i: usize, j: usize) -> bool {
        self.rows[i].values[j] > 0.0
    }

    pub fn pattern(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.values.iter().map(|&v| v > 0.0).collect()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.values.clone()).collect()
    }

    /// Restriction to `states` (re-indexed in the given order). Each row is
    /// renormalized, which is exact when `states` is closed.
    pub fn restrict(&self, states: &[usize]) -> Self {
        let rows = states.iter().map(|&i| states.iter().map(|&j| self.get(i, j)).collect()).collect();
        Self::from_unnormalized_rows(rows)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.support.clone()).collect()
    }
}

/// A kernel together with a stationary distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSpec {
    kernel: StochasticMatrix,
    m: ProbVector,
}

impl MarkovSpec {
    pub fn kernel(&self) -> &StochasticMatrix {
        &self.kernel
    }

    pub fn m(&self) -> &ProbVector {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.kernel.n()
    }

    /// States with positive stationary mass.
    pub fn support(&self) -> &[usize] {
        self.m.support()
    }

    pub fn is_active(&self, y: usize) -> bool {
        self.m.contains(y)
    }

    /// Successor lists restricted to the support, indexed by position in
    /// [`MarkovSpec::support`].
    fn support_adjacency(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let support = self.support().to_vec();
        let local = local_index(self.n(), &support);
        let adj = support
            .iter()
            .map(|&y| self.kernel.successors(y).iter().filter_map(|&z| local[z]).collect())
            .collect();
        (support, adj)
    }
}

fn local_index(n: usize, states: &[usize]) -> Vec<Option<usize>> {
    let mut local = vec![None; n];
    for (pos, &s) in states.iter().enumerate() {
        local[s] = Some(pos);
    }
    local
}

/// Checks that `m` is invariant for `kernel` and that its support is closed.
pub fn validate_spec(kernel: StochasticMatrix, m: ProbVector) -> Result<MarkovSpec, KernelError> {
    let n = kernel.n();
    if m.len() != n {
        return Err(KernelError::DimensionMismatch { expected: n, found: m.len() });
    }
    let deviation = invariance_defect(&kernel, m.values());
    if deviation > EPS_SUM {
        return Err(KernelError::NotInvariant(deviation));
    }
    for &y in m.support() {
        if let Some(&z) = kernel.successors(y).iter().find(|&&z| !m.contains(z)) {
            return Err(KernelError::SupportNotClosed { from: y, to: z });
        }
    }
    Ok(MarkovSpec { kernel, m })
}

/// `max_i |sum_j m(j) pi(j,i) - m(i)|`.
pub fn invariance_defect(kernel: &StochasticMatrix, m: &[f64]) -> f64 {
    let n = kernel.n();
    let mut image = vec![0.0; n];
    for (j, &mj) in m.iter().enumerate() {
        for &i in kernel.successors(j) {
            image[i] += mj * kernel.get(j, i);
        }
    }
    image.iter().zip(m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Closed communicating classes of the kernel's transition graph, ordered by
/// smallest member. Their number is the dimension of the space of
/// stationary measures.
pub fn closed_classes(kernel: &StochasticMatrix) -> Vec<Vec<usize>> {
    graph::closed_components(&kernel.adjacency())
}

/// The stationary distribution supported on one closed class.
pub fn stationary_on_class(kernel: &StochasticMatrix, class: &[usize]) -> ProbVector {
    let c = class.len();
    // (I - P_CC)^T m = 0 with the last equation replaced by sum(m) = 1.
    let mut a = DMatrix::<f64>::zeros(c, c);
    for (r, &i) in class.iter().enumerate() {
        for (s, &j) in class.iter().enumerate() {
            let delta = if r == s { 1.0 } else { 0.0 };
            a[(s, r)] = delta - kernel.get(i, j);
        }
    }
    for r in 0..c {
        a[(c - 1, r)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(c);
    rhs[c - 1] = 1.0;
    let solution = a.lu().solve(&rhs).expect("closed class has a unique stationary distribution");

    let mut values = vec![0.0; kernel.n()];
    for (r, &i) in class.iter().enumerate() {
        values[i] = solution[r].max(0.0);
    }
    let sum: f64 = values.iter().sum();
    ProbVector::normalized(values, sum)
}

/// The unique stationary distribution, or [`KernelError::MultipleStationary`]
/// when the kernel has more than one closed class.
pub fn stationary_distribution(kernel: &StochasticMatrix) -> Result<ProbVector, KernelError> {
    let classes = closed_classes(kernel);
    match classes.as_slice() {
        [class] => Ok(stationary_on_class(kernel, class)),
        _ => Err(KernelError::MultipleStationary(classes.len())),
    }
}

pub fn kernel_product(a: &StochasticMatrix, b: &StochasticMatrix) -> Result<StochasticMatrix, KernelError> {
    let n = a.n();
    if b.n() != n {
        return Err(KernelError::DimensionMismatch { expected: n, found: b.n() });
    }
    let rows = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            for &k in a.successors(i) {
                let aik = a.get(i, k);
                for &j in b.successors(k) {
                    row[j] += aik * b.get(k, j);
                }
            }
            row
        })
        .collect();
    StochasticMatrix::from_rows(rows)
}

/// States from which some power of the kernel charges the target set.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachReport {
    pub target: StateSet,
    /// `U_B`: union of all `per_step` sets.
    pub reach: StateSet,
    /// `per_step[k]` holds the states `y` with `pi^(k+1)(y, B) > 0`, listed
    /// until a step adds nothing new to the union.
    pub per_step: Vec<StateSet>,
}

/// Backward reachability of `target` on the support of `m`.
pub fn reach_set(spec: &MarkovSpec, target: &StateSet) -> ReachReport {
    let n = spec.n();
    let mut predecessors = vec![Vec::new(); n];
    for &y in spec.support() {
        for &z in spec.kernel.successors(y) {
            predecessors[z].push(y);
        }
    }

    let mut reach = StateSet::new();
    let mut per_step = Vec::new();
    let mut current: StateSet = target.iter().copied().filter(|&b| spec.is_active(b)).collect();
    loop {
        let next: StateSet = current.iter().flat_map(|&z| predecessors[z].iter().copied()).collect();
        let grew = next.iter().any(|y| !reach.contains(y));
        if next.is_empty() {
            break;
        }
        reach.extend(next.iter().copied());
        per_step.push(next.clone());
        if !grew {
            break;
        }
        current = next;
    }
    ReachReport {
        target: target.clone(),
        reach,
        per_step,
    }
}

/// Strong connectivity of the transition graph on the support of `m`.
/// Equivalently, ergodicity of the Markov shift.
pub fn is_irreducible(spec: &MarkovSpec) -> bool {
    let (_, adj) = spec.support_adjacency();
    graph::is_strongly_connected(&adj)
}

/// The time reversal `pi*(i,j) = m(j) pi(j,i) / m(i)`; null states get a
/// self-loop.
pub fn reverse_kernel(spec: &MarkovSpec) -> StochasticMatrix {
    let n = spec.n();
    let m = spec.m();
    let rows = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            if m.contains(i) {
                for &j in spec.support() {
                    row[j] = m[j] * spec.kernel.get(j, i) / m[i];
                }
            } else {
                row[i] = 1.0;
            }
            row
        })
        .collect();
    StochasticMatrix::from_unnormalized_rows(rows)
}

/// Classes of the transitive closure of `i ~ j` (both are successors of a
/// common active state), over the support of `m`.
pub fn sim_classes(spec: &MarkovSpec) -> Partition {
    let mut dsu = DisjointSets::new(spec.n());
    for &k in spec.support() {
        let succ = spec.kernel.successors(k);
        for w in succ.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    Partition::from_blocks(dsu.groups(spec.support()))
}

/// Classes of the dual relation: `i` and `j` share a common successor.
pub fn dual_sim_classes(spec: &MarkovSpec) -> Partition {
    let mut dsu = DisjointSets::new(spec.n());
    let mut first_predecessor: Vec<Option<usize>> = vec![None; spec.n()];
    for &i in spec.support() {
        for &k in spec.kernel.successors(i) {
            match first_predecessor[k] {
                Some(j) => {
                    dsu.union(i, j);
                }
                None => first_predecessor[k] = Some(i),
            }
        }
    }
    Partition::from_blocks(dsu.groups(spec.support()))
}

/// The four routes to strict irreducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictReport {
    /// The `~` graph is connected.
    pub sim_connected: bool,
    /// The dual graph is connected.
    pub dual_sim_connected: bool,
    /// `P^T P` is irreducible.
    pub transpose_product_irreducible: bool,
    /// `P P^T` is irreducible.
    pub product_transpose_irreducible: bool,
}

impl StrictReport {
    pub fn consistent(&self) -> bool {
        let v = self.sim_connected;
        self.dual_sim_connected == v && self.transpose_product_irreducible == v && self.product_transpose_irreducible == v
    }
}

pub fn strict_report(spec: &MarkovSpec) -> StrictReport {
    let support = spec.support();
    let s = support.len();
    let p = DMatrix::from_fn(s, s, |r, c| spec.kernel.get(support[r], support[c]));
    let irreducible = |q: DMatrix<f64>| {
        let adj: Vec<Vec<usize>> = (0..s).map(|r| (0..s).filter(|&c| q[(r, c)] > 0.0).collect()).collect();
        graph::is_strongly_connected(&adj)
    };
    StrictReport {
        sim_connected: sim_classes(spec).len() == 1,
        dual_sim_connected: dual_sim_classes(spec).len() == 1,
        transpose_product_irreducible: irreducible(p.transpose() * &p),
        product_transpose_irreducible: irreducible(&p * p.transpose()),
    }
}

/// Strict irreducibility, cross-checked across all four characterizations.
pub fn is_strictly_irreducible(spec: &MarkovSpec) -> Result<bool, KernelError> {
    let report = strict_report(spec);
    if !report.consistent() {
        return Err(KernelError::InternalInconsistency(format!("{report:?}")));
    }
    Ok(report.sim_connected)
}

/// Every active row is supported inside `set` or inside its complement.
pub fn deterministic_check(spec: &MarkovSpec, set: &StateSet) -> bool {
    spec.support().iter().all(|&y| {
        let succ = spec.kernel.successors(y);
        succ.iter().all(|z| set.contains(z)) || succ.iter().all(|z| !set.contains(z))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicSets {
    pub sets: Vec<StateSet>,
    /// When set, `sets` holds only the generating blocks and the deterministic
    /// sets are all their unions.
    pub implicit_union_closure: bool,
}

/// Deterministic sets: the empty set plus all unions of `~` classes.
pub fn deterministic_sets(spec: &MarkovSpec) -> DeterministicSets {
    let classes = sim_classes(spec);
    if classes.len() <= MAX_ENUM_BLOCKS {
        DeterministicSets {
            sets: classes.union_closure(),
            implicit_union_closure: false,
        }
    } else {
        DeterministicSets {
            sets: classes.blocks().iter().map(|b| b.iter().copied().collect()).collect(),
            implicit_union_closure: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(rows: Vec<Vec<f64>>, m: Vec<f64>) -> MarkovSpec {
        validate_spec(StochasticMatrix::from_rows(rows).unwrap(), ProbVector::new(m).unwrap()).unwrap()
    }

    fn flip() -> MarkovSpec {
        spec(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5])
    }

    fn set(items: &[usize]) -> StateSet {
        items.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        flip();
        spec(vec![vec![1.0]], vec![1.0]);
        let err = validate_spec(
            StochasticMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            ProbVector::new(vec![0.9, 0.1]).unwrap(),
        )
        .unwrap_err();
        // image of m is (0.1, 0.9)
        assert!(matches!(err, KernelError::NotInvariant(d) if (d - 0.8).abs() < 1e-12));
    }

    #[test]
    fn validate_dimension_mismatch() {
        let err = validate_spec(StochasticMatrix::identity(2), ProbVector::uniform(3)).unwrap_err();
        assert_eq!(err, KernelError::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn rows_are_snapped_and_checked() {
        let k = StochasticMatrix::from_rows(vec![vec![1e-13, 1.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(k.get(0, 0), 0.0);
        assert_eq!(k.successors(0), &[1]);
        let err = StochasticMatrix::from_rows(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).unwrap_err();
        assert!(matches!(err, KernelError::RowNotStochastic { row: 0, .. }));
        let err = StochasticMatrix::from_rows(vec![vec![1.5, -0.5], vec![0.5, 0.5]]).unwrap_err();
        assert!(matches!(err, KernelError::InvalidMatrixEntry { row: 0, col: 0, .. }));
        assert!(matches!(
            StochasticMatrix::from_rows(vec![vec![1.0], vec![1.0]]),
            Err(KernelError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn support_must_be_closed() {
        // m = (1, 0) is invariant up to tolerance only if state 0 stays put.
        let k = StochasticMatrix::from_rows(vec![vec![1.0 - 1e-10, 1e-10], vec![0.0, 1.0]]).unwrap();
        let err = validate_spec(k, ProbVector::new(vec![1.0, 0.0]).unwrap()).unwrap_err();
        assert_eq!(err, KernelError::SupportNotClosed { from: 0, to: 1 });
    }

    #[test]
    fn stationary_examples() {
        let m = stationary_distribution(flip().kernel()).unwrap();
        assert_abs_diff_eq!(m[0], 0.5, epsilon = 1e-15);
        assert_eq!(
            stationary_distribution(&StochasticMatrix::identity(2)),
            Err(KernelError::MultipleStationary(2))
        );
        let half = StochasticMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let m = stationary_distribution(&half).unwrap();
        assert_abs_diff_eq!(m[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn stationary_ignores_transient_states() {
        // 0 -> {0,1}, 1 <-> 2
        let k = StochasticMatrix::from_rows(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let m = stationary_distribution(&k).unwrap();
        assert_eq!(m.support(), &[1, 2]);
        assert!(validate_spec(k, m).is_ok());
    }

    #[test]
    fn product_examples() {
        let p = flip().kernel().clone();
        assert_eq!(kernel_product(&p, &p).unwrap(), StochasticMatrix::identity(2));
        assert_eq!(kernel_product(&p, &StochasticMatrix::identity(2)).unwrap(), p);
        let a = StochasticMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.0, 1.0]]).unwrap();
        let aa = kernel_product(&a, &a).unwrap();
        assert_eq!(aa.to_rows(), vec![vec![0.25, 0.75], vec![0.0, 1.0]]);
        assert!(kernel_product(&a, &StochasticMatrix::identity(3)).is_err());
    }

    #[test]
    fn reach_examples() {
        let r = reach_set(&flip(), &set(&[0]));
        assert_eq!(r.reach, set(&[0, 1]));
        assert_eq!(r.per_step[0], set(&[1]));
        assert_eq!(r.per_step[1], set(&[0]));
        assert!(reach_set(&flip(), &StateSet::new()).reach.is_empty());
        let id = spec(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]);
        assert_eq!(reach_set(&id, &set(&[0])).reach, set(&[0]));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&flip()));
        let id = spec(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]);
        assert!(!is_irreducible(&id));
        let blocks = spec(
            vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.25, 0.25, 0.5],
        );
        assert!(!is_irreducible(&blocks));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(&reverse_kernel(&flip()), flip().kernel());
        let s = spec(vec![vec![0.5, 0.5], vec![1.0, 0.0]], vec![2.0 / 3.0, 1.0 / 3.0]);
        let r = reverse_kernel(&s);
        for (got, want) in r.to_rows().iter().flatten().zip([0.5, 0.5, 1.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let ds = spec(
            vec![vec![0.2, 0.8, 0.0], vec![0.0, 0.2, 0.8], vec![0.8, 0.0, 0.2]],
            vec![1.0 / 3.0; 3],
        );
        let r = reverse_kernel(&ds);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(r.get(i, j), ds.kernel().get(j, i), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn sim_class_examples() {
        assert_eq!(sim_classes(&flip()).len(), 2);
        assert_eq!(dual_sim_classes(&flip()).len(), 2);
        let bern = spec(vec![vec![0.3, 0.7], vec![0.3, 0.7]], vec![0.3, 0.7]);
        assert_eq!(sim_classes(&bern).len(), 1);
        assert_eq!(dual_sim_classes(&bern).len(), 1);
        let id3 = spec(
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.2, 0.3, 0.5],
        );
        assert_eq!(sim_classes(&id3), Partition::singletons(&[0, 1, 2]));
        let point = spec(vec![vec![1.0, 0.0], vec![1.0, 0.0]], vec![1.0, 0.0]);
        assert_eq!(dual_sim_classes(&point), Partition::singletons(&[0]));
    }

    #[test]
    fn strict_examples() {
        assert_eq!(is_strictly_irreducible(&flip()), Ok(false));
        let bern = spec(vec![vec![0.3, 0.7], vec![0.3, 0.7]], vec![0.3, 0.7]);
        assert_eq!(is_strictly_irreducible(&bern), Ok(true));
        assert_eq!(is_strictly_irreducible(&spec(vec![vec![1.0]], vec![1.0])), Ok(true));
        let tri = spec(
            vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]],
            vec![1.0 / 3.0; 3],
        );
        assert_eq!(is_strictly_irreducible(&tri), Ok(true));
    }

    #[test]
    fn deterministic_examples() {
        assert!(deterministic_check(&flip(), &set(&[0])));
        assert!(deterministic_check(&flip(), &StateSet::new()));
        let bern = spec(vec![vec![0.3, 0.7], vec![0.3, 0.7]], vec![0.3, 0.7]);
        assert!(!deterministic_check(&bern, &set(&[1])));

        let sets = deterministic_sets(&flip());
        assert!(!sets.implicit_union_closure);
        assert_eq!(sets.sets, vec![set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]);
        assert_eq!(deterministic_sets(&bern).sets, vec![set(&[]), set(&[0, 1])]);
    }

    #[test]
    fn deterministic_sets_cap() {
        let n = MAX_ENUM_BLOCKS + 1;
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let s = spec(rows, vec![1.0 / n as f64; n]);
        let out = deterministic_sets(&s);
        assert!(out.implicit_union_closure);
        assert_eq!(out.sets.len(), n);
    }
}
