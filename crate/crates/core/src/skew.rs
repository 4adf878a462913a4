//! Step skew products `T(w, x) = (S w, T_{w_0} x)` over a Markov shift.
//!
//! Invariant functions of `T` depend only on `(w_0, x)`, so everything here
//! is decided on the pair chain: the Markov chain on `supp(m) x supp(mu)`
//! stepping `(y, x) -> (z, T_y x)` with probability `pi(y, z)`. The product
//! measure `m (x) mu` is stationary for it and has full support, so there
//! are no transient pair-states and the strongly connected components are
//! exactly the closed classes, i.e. the atoms of the invariant sigma-algebra.

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dynamics::{
    family_invariant_partition, is_family_ergodic, DynamicsError, FiniteMeasureSpace, MeasurePreservingMap,
    TransformationFamily,
};
use crate::graph;
use crate::kernels::{
    is_irreducible, is_strictly_irreducible, reach_set, sim_classes, KernelError, MarkovSpec, EPS_SUM,
};
use crate::partition::{Partition, StateSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkewError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("construction does not apply: {0}")]
    NotApplicable(&'static str),
    #[error("structure theorem violated: {0}")]
    TheoremViolation(String),
}

/// A Markov spec driving a transformation family, one map per state.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewSystem {
    spec: MarkovSpec,
    family: TransformationFamily,
}

impl SkewSystem {
    pub fn new(spec: MarkovSpec, family: TransformationFamily) -> Result<Self, SkewError> {
        if family.len() != spec.n() {
            return Err(DynamicsError::FamilySize { expected: spec.n(), found: family.len() }.into());
        }
        Ok(SkewSystem { spec, family })
    }

    pub fn spec(&self) -> &MarkovSpec {
        &self.spec
    }

    pub fn family(&self) -> &TransformationFamily {
        &self.family
    }

    pub fn space(&self) -> &FiniteMeasureSpace {
        self.family.space()
    }

    /// Short content hash of the kernel, both measures and all map tables.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let n = self.spec.n();
        h.update((n as u64).to_le_bytes());
        for i in 0..n {
            for j in 0..n {
                h.update(self.spec.kernel().get(i, j).to_bits().to_le_bytes());
            }
        }
        for &v in self.spec.m().values() {
            h.update(v.to_bits().to_le_bytes());
        }
        for &v in self.space().mu().values() {
            h.update(v.to_bits().to_le_bytes());
        }
        for map in self.family.maps() {
            for &t in map.table() {
                h.update((t as u64).to_le_bytes());
            }
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The induced chain on pair-states `(y, x)`.
#[derive(Debug, Clone)]
pub struct PairChain {
    states: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    points: usize,
    edges: Vec<Vec<(usize, f64)>>,
    stationary: Vec<f64>,
}

impl PairChain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Pair-states in `y`-major order.
    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn index_of(&self, y: usize, x: usize) -> Option<usize> {
        if x >= self.points {
            return None;
        }
        self.index.get(y * self.points + x).copied().flatten()
    }

    /// Outgoing `(target, probability)` pairs.
    pub fn edges(&self, i: usize) -> &[(usize, f64)] {
        &self.edges[i]
    }

    /// `m(y) mu(x)` per pair-state.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|e| e.iter().map(|&(t, _)| t).collect()).collect()
    }

    /// One step of the forward equation, `p -> p P`.
    pub fn step(&self, p: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.len()];
        for (i, &mass) in p.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(t, w) in &self.edges[i] {
                next[t] += mass * w;
            }
        }
        next
    }

    /// `max |(s P) - s|` for the product measure `s`.
    pub fn stationarity_defect(&self) -> f64 {
        self.step(&self.stationary)
            .iter()
            .zip(&self.stationary)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_sum_defect(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| (e.iter().map(|&(_, w)| w).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn build_pair_chain(sys: &SkewSystem) -> PairChain {
    let spec = &sys.spec;
    let space = sys.space();
    let points = space.len();
    let mut states = Vec::new();
    let mut index = vec![None; spec.n() * points];
    for &y in spec.support() {
        for &x in space.support() {
            index[y * points + x] = Some(states.len());
            states.push((y, x));
        }
    }
    let edges: Vec<Vec<(usize, f64)>> = states
        .iter()
        .map(|&(y, x)| {
            let image = sys.family.map(y).apply(x);
            spec.kernel()
                .successors(y)
                .iter()
                .map(|&z| {
                    let target = index[z * points + image].expect("pair chain leaves its state space");
                    (target, spec.kernel().get(y, z))
                })
                .collect()
        })
        .collect();
    let stationary = states.iter().map(|&(y, x)| spec.m()[y] * space.mu()[x]).collect();
    let chain = PairChain { states, index, points, edges, stationary };
    let defect = chain.stationarity_defect();
    assert!(defect <= 10.0 * EPS_SUM, "product measure is not stationary for the pair chain ({defect:e})");
    chain
}

/// Closed-class decomposition of the pair chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    /// Blocks of pair-state indices (see [`PairChain::states`]).
    pub classes: Partition,
    pub class_masses: Vec<f64>,
    /// Every class is `supp(m) x B` for some set of points `B`.
    pub product_structured: bool,
    /// Pair-state index to class index.
    pub class_of: Vec<usize>,
}

impl ErgodicityReport {
    /// `m (x) mu`-mass of the class containing pair-state `i`.
    pub fn mass_of(&self, i: usize) -> f64 {
        self.class_masses[self.class_of[i]]
    }
}

pub fn is_skew_ergodic(sys: &SkewSystem) -> ErgodicityReport {
    ergodicity_of_chain(sys, &build_pair_chain(sys))
}

pub(crate) fn ergodicity_of_chain(sys: &SkewSystem, chain: &PairChain) -> ErgodicityReport {
    let adjacency = chain.adjacency();
    let classes = Partition::from_blocks(graph::strongly_connected_components(&adjacency));
    debug_assert_eq!(graph::closed_components(&adjacency).len(), classes.len(), "transient pair-states");

    let mut class_of = vec![0; chain.len()];
    for (c, block) in classes.blocks().iter().enumerate() {
        for &i in block {
            class_of[i] = c;
        }
    }
    let class_masses = classes
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&i| chain.stationary[i]).sum())
        .collect();
    let product_structured = classes
        .blocks()
        .iter()
        .all(|b| x_section(sys, chain, b).is_some());
    ErgodicityReport {
        ergodic: classes.len() == 1,
        classes,
        class_masses,
        product_structured,
        class_of,
    }
}

/// The common `x`-section of a class, if the class is `supp(m) x section`.
fn x_section(sys: &SkewSystem, chain: &PairChain, class: &[usize]) -> Option<Vec<usize>> {
    let support = sys.spec.support();
    let mut sections: Vec<Vec<usize>> = vec![Vec::new(); sys.spec.n()];
    for &i in class {
        let (y, x) = chain.states[i];
        sections[y].push(x);
    }
    let first = sections[support[0]].clone();
    support.iter().all(|&y| sections[y] == first).then(|| {
        let mut s = first;
        s.sort_unstable();
        s
    })
}

/// Indicators of the closed classes: a basis of the solutions of
/// `g(y, x) = sum_z pi(y, z) g(z, T_y x)`.
pub fn invariant_function_basis(sys: &SkewSystem) -> Vec<Vec<f64>> {
    let chain = build_pair_chain(sys);
    let report = ergodicity_of_chain(sys, &chain);
    report
        .classes
        .blocks()
        .iter()
        .map(|block| {
            let mut g = vec![0.0; chain.len()];
            for &i in block {
                g[i] = 1.0;
            }
            g
        })
        .collect()
}

/// Nullity of `I - P` on the pair chain, from the singular values.
pub fn fixed_space_dimension(chain: &PairChain) -> usize {
    let n = chain.len();
    let mut a = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for &(t, w) in chain.edges(i) {
            a[(i, t)] -= w;
        }
    }
    let sv = a.singular_values();
    let scale = sv.iter().copied().fold(1.0, f64::max);
    sv.iter().filter(|&&s| s <= 1e-9 * scale).count()
}

/// Whether every pair-chain class is `supp(m) x B` with `B` running over
/// the blocks of the family-invariant partition.
///
/// Under strict irreducibility this always holds; a `false` there is
/// reported as [`SkewError::TheoremViolation`].
pub fn check_product_structure(sys: &SkewSystem) -> Result<bool, SkewError> {
    let chain = build_pair_chain(sys);
    let report = ergodicity_of_chain(sys, &chain);
    let structured = report.product_structured && {
        let sections: Vec<Vec<usize>> = report
            .classes
            .blocks()
            .iter()
            .filter_map(|b| x_section(sys, &chain, b))
            .collect();
        Partition::from_blocks(sections) == family_invariant_partition(&sys.family, sys.spec.support())
    };
    if !structured && is_strictly_irreducible(&sys.spec)? {
        return Err(SkewError::TheoremViolation(format!(
            "strictly irreducible kernel but pair classes are {}",
            report.classes
        )));
    }
    Ok(structured)
}

/// A system built to witness non-ergodicity of a skew product.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub system: SkewSystem,
    /// The state set the construction is based on.
    pub witness: StateSet,
    /// A pair-chain invariant set of intermediate mass.
    pub invariant_pairs: Vec<(usize, usize)>,
}

fn swap_family(spec: &MarkovSpec, swap: impl Fn(usize) -> bool) -> TransformationFamily {
    let sigma = crate::dynamics::validate_map(&FiniteMeasureSpace::uniform(2), vec![1, 0]).expect("swap preserves uniform");
    let maps = (0..spec.n())
        .map(|y| if swap(y) { sigma.clone() } else { MeasurePreservingMap::identity(2) })
        .collect();
    TransformationFamily::new(FiniteMeasureSpace::uniform(2), maps).expect("maps match the space")
}

/// For an irreducible kernel that is not strictly irreducible: an ergodic
/// family on two points whose skew product is not ergodic.
///
/// `B` is the smallest `~` class (earliest on ties). States whose row leaves
/// their own side of `B | B^c` swap the two points; the others fix them.
/// Then `(B x {1}) u (B^c x {2})` is invariant with mass 1/2.
pub fn build_counterexample_family(spec: &MarkovSpec) -> Result<Counterexample, SkewError> {
    if !is_irreducible(spec) {
        return Err(SkewError::NotApplicable("kernel is not irreducible"));
    }
    if is_strictly_irreducible(spec)? {
        return Err(SkewError::NotApplicable("kernel is strictly irreducible"));
    }
    let classes = sim_classes(spec);
    let block = classes
        .blocks()
        .iter()
        .min_by_key(|b| b.len())
        .expect("support is non-empty");
    let witness: StateSet = block.iter().copied().collect();

    let kernel = spec.kernel();
    let family = swap_family(spec, |y| {
        spec.is_active(y) && witness.contains(&y) != witness.contains(&kernel.successors(y)[0])
    });
    let invariant_pairs = spec
        .support()
        .iter()
        .map(|&y| (y, if witness.contains(&y) { 0 } else { 1 }))
        .collect();
    Ok(Counterexample {
        system: SkewSystem::new(spec.clone(), family)?,
        witness,
        invariant_pairs,
    })
}

/// For a reducible kernel: the identity on a non-trivial absorbing set `A`
/// and the swap elsewhere. `A x {1}` is invariant but not of product form.
///
/// `A` is the complement of `U_{s}` for the smallest state `s` whose
/// reach set misses part of the support.
pub fn build_base_counterexample(spec: &MarkovSpec) -> Result<Counterexample, SkewError> {
    if is_irreducible(spec) {
        return Err(SkewError::NotApplicable("kernel is irreducible"));
    }
    let support: StateSet = spec.support().iter().copied().collect();
    let absorbing: StateSet = spec
        .support()
        .iter()
        .find_map(|&s| {
            let reach = reach_set(spec, &StateSet::from([s])).reach;
            (reach != support).then(|| support.difference(&reach).copied().collect())
        })
        .expect("a reducible kernel has a state not reached from everywhere");

    let family = swap_family(spec, |y| spec.is_active(y) && !absorbing.contains(&y));
    let invariant_pairs = absorbing.iter().map(|&y| (y, 0)).collect();
    Ok(Counterexample {
        system: SkewSystem::new(spec.clone(), family)?,
        witness: absorbing,
        invariant_pairs,
    })
}

/// Convenience: the easy direction, skew ergodicity forces both factors to
/// be ergodic.
pub fn factors_ergodic(sys: &SkewSystem) -> bool {
    is_family_ergodic(&sys.family, sys.spec.support()) && is_irreducible(&sys.spec)
}
