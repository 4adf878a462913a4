//! Finite probability spaces, measure-preserving maps and transformation
//! families.
//!
//! On a finite space a map preserves `mu` only if it permutes the support of
//! `mu` (and, within it, each level set of `mu`). Points of zero mass are
//! ignored everywhere: they belong to no block of the invariant partition and
//! conditional expectations vanish there.

use thiserror::Error;

use crate::graph::DisjointSets;
use crate::kernels::{KernelError, ProbVector, EPS_SUM};
pub use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid measure: {0}")]
    Measure(#[from] KernelError),
    #[error("{labels} labels for a measure on {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("map table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("point {point} is sent to {image}, which is not a point")]
    PointOutOfRange { point: usize, image: usize },
    #[error("map is not measure preserving at point {point} (deviation {deviation:e})")]
    NotMeasurePreserving { point: usize, deviation: f64 },
    #[error("map is not a bijection of the support: point {point} has {preimages} preimages")]
    NotBijective { point: usize, preimages: usize },
    #[error("family has {found} maps, expected {expected}")]
    FamilySize { expected: usize, found: usize },
    #[error("function has {found} values, expected {expected}")]
    FunctionLength { expected: usize, found: usize },
}

/// `(X, mu)` with labelled points.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasureSpace {
    labels: Vec<String>,
    mu: ProbVector,
}

impl FiniteMeasureSpace {
    pub fn new(labels: Vec<String>, mu: ProbVector) -> Result<Self, DynamicsError> {
        if labels.len() != mu.len() {
            return Err(DynamicsError::LabelCount { labels: labels.len(), points: mu.len() });
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(DynamicsError::DuplicateLabel(dup.clone()));
        }
        Ok(FiniteMeasureSpace { labels, mu })
    }

    /// Uniform measure on points labelled `1..=k`.
    pub fn uniform(k: usize) -> Self {
        FiniteMeasureSpace {
            labels: (1..=k).map(|i| i.to_string()).collect(),
            mu: ProbVector::uniform(k),
        }
    }

    /// Points labelled `1..=k` with the given measure.
    pub fn with_measure(mu: ProbVector) -> Self {
        FiniteMeasureSpace {
            labels: (1..=mu.len()).map(|i| i.to_string()).collect(),
            mu,
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn point(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mu(&self) -> &ProbVector {
        &self.mu
    }

    pub fn support(&self) -> &[usize] {
        self.mu.support()
    }

    pub fn integral(&self, f: &[f64]) -> f64 {
        self.support().iter().map(|&x| self.mu[x] * f[x]).sum()
    }
}

/// A map on the points of a [`FiniteMeasureSpace`] that preserves `mu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurePreservingMap {
    table: Vec<usize>,
}

impl MeasurePreservingMap {
    pub fn identity(k: usize) -> Self {
        MeasurePreservingMap { table: (0..k).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(x, &t)| x == t)
    }
}

/// Checks that the pushforward of `mu` under `table` is `mu`.
pub fn validate_map(space: &FiniteMeasureSpace, table: Vec<usize>) -> Result<MeasurePreservingMap, DynamicsError> {
    let k = space.len();
    if table.len() != k {
        return Err(DynamicsError::TableLength { expected: k, found: table.len() });
    }
    if let Some((point, &image)) = table.iter().enumerate().find(|(_, &t)| t >= k) {
        return Err(DynamicsError::PointOutOfRange { point, image });
    }

    let mu = space.mu();
    let mut pushforward = vec![0.0; k];
    let mut preimages = vec![0usize; k];
    for &x in space.support() {
        pushforward[table[x]] += mu[x];
        preimages[table[x]] += 1;
    }
    let (point, deviation) = pushforward
        .iter()
        .zip(mu.values())
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    if deviation > EPS_SUM {
        return Err(DynamicsError::NotMeasurePreserving { point, deviation });
    }
    // Forced by finiteness; can only fail when two mass levels are within
    // tolerance of each other.
    if let Some(&point) = space.support().iter().find(|&&x| preimages[x] != 1) {
        return Err(DynamicsError::NotBijective { point, preimages: preimages[point] });
    }
    Ok(MeasurePreservingMap { table })
}

/// One measure-preserving map per Markov state, on a shared space.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationFamily {
    space: FiniteMeasureSpace,
    maps: Vec<MeasurePreservingMap>,
}

impl TransformationFamily {
    pub fn new(space: FiniteMeasureSpace, maps: Vec<MeasurePreservingMap>) -> Result<Self, DynamicsError> {
        for map in &maps {
            if map.table.len() != space.len() {
                return Err(DynamicsError::TableLength { expected: space.len(), found: map.table.len() });
            }
        }
        Ok(TransformationFamily { space, maps })
    }

    /// Validates each table against `space`.
    pub fn from_tables(space: FiniteMeasureSpace, tables: Vec<Vec<usize>>) -> Result<Self, DynamicsError> {
        let maps = tables
            .into_iter()
            .map(|t| validate_map(&space, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransformationFamily { space, maps })
    }

    pub fn space(&self) -> &FiniteMeasureSpace {
        &self.space
    }

    pub fn maps(&self) -> &[MeasurePreservingMap] {
        &self.maps
    }

    pub fn map(&self, y: usize) -> &MeasurePreservingMap {
        &self.maps[y]
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// The finest partition of `supp(mu)` whose blocks are invariant under
/// every active map: components of the graph with edges `{x, T_y(x)}`.
pub fn family_invariant_partition(family: &TransformationFamily, active: &[usize]) -> Partition {
    let support = family.space.support();
    let mut dsu = DisjointSets::new(family.space.len());
    for &y in active {
        let map = &family.maps[y];
        for &x in support {
            dsu.union(x, map.apply(x));
        }
    }
    Partition::from_blocks(dsu.groups(support))
}

pub fn is_family_ergodic(family: &TransformationFamily, active: &[usize]) -> bool {
    family_invariant_partition(family, active).len() == 1
}

/// `E[f | Sigma]`: block averages of `f` under `mu`, zero off the support.
pub fn conditional_expectation(
    family: &TransformationFamily,
    active: &[usize],
    f: &[f64],
) -> Result<Vec<f64>, DynamicsError> {
    let space = &family.space;
    if f.len() != space.len() {
        return Err(DynamicsError::FunctionLength { expected: space.len(), found: f.len() });
    }
    let mu = space.mu();
    let mut out = vec![0.0; space.len()];
    for block in family_invariant_partition(family, active).blocks() {
        let mass: f64 = block.iter().map(|&x| mu[x]).sum();
        let avg = block.iter().map(|&x| mu[x] * f[x]).sum::<f64>() / mass;
        for &x in block {
            out[x] = avg;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle_family() -> TransformationFamily {
        TransformationFamily::from_tables(FiniteMeasureSpace::uniform(3), vec![vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
    }

    #[test]
    fn validate_map_examples() {
        let space = FiniteMeasureSpace::uniform(3);
        assert!(validate_map(&space, vec![1, 2, 0]).is_ok());
        assert!(validate_map(&space, vec![0, 1, 2]).unwrap().is_identity());
        let two = FiniteMeasureSpace::uniform(2);
        assert!(matches!(
            validate_map(&two, vec![0, 0]),
            Err(DynamicsError::NotMeasurePreserving { point: 0, .. })
        ));
        assert!(matches!(validate_map(&two, vec![0, 2]), Err(DynamicsError::PointOutOfRange { point: 1, image: 2 })));
        assert!(matches!(validate_map(&two, vec![0]), Err(DynamicsError::TableLength { .. })));
    }

    #[test]
    fn level_sets_must_be_respected() {
        let space = FiniteMeasureSpace::with_measure(ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap());
        assert!(validate_map(&space, vec![0, 2, 1]).is_ok());
        assert!(validate_map(&space, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn null_points_are_free() {
        let space = FiniteMeasureSpace::with_measure(ProbVector::new(vec![0.5, 0.5, 0.0]).unwrap());
        let map = validate_map(&space, vec![1, 0, 0]).unwrap();
        let family = TransformationFamily::new(space, vec![map]).unwrap();
        let sigma = family_invariant_partition(&family, &[0]);
        assert_eq!(sigma, Partition::from_blocks(vec![vec![0, 1]]));
        let ce = conditional_expectation(&family, &[0], &[1.0, 3.0, 7.0]).unwrap();
        assert_eq!(ce, vec![2.0, 2.0, 0.0]);
    }

    #[test]
    fn duplicate_labels() {
        let err = FiniteMeasureSpace::new(vec!["a".into(), "a".into()], ProbVector::uniform(2)).unwrap_err();
        assert_eq!(err, DynamicsError::DuplicateLabel("a".into()));
    }

    #[test]
    fn invariant_partition_examples() {
        let fam = three_cycle_family();
        assert!(is_family_ergodic(&fam, &[0, 1]));

        let id = TransformationFamily::new(FiniteMeasureSpace::uniform(4), vec![MeasurePreservingMap::identity(4)]).unwrap();
        assert_eq!(family_invariant_partition(&id, &[0]), Partition::singletons(&[0, 1, 2, 3]));
        assert!(!is_family_ergodic(&id, &[0]));

        // Id on one state, swap on the other; only the swap state is active.
        let mixed = TransformationFamily::from_tables(FiniteMeasureSpace::uniform(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(is_family_ergodic(&mixed, &[0, 1]));
        assert!(is_family_ergodic(&mixed, &[1]));
        assert!(!is_family_ergodic(&mixed, &[0]));
    }

    #[test]
    fn conditional_expectation_examples() {
        let fam = three_cycle_family();
        let ce = conditional_expectation(&fam, &[0, 1], &[3.0, 0.0, 6.0]).unwrap();
        assert!(ce.iter().all(|&v| (v - 3.0).abs() < 1e-15));

        let id = TransformationFamily::new(FiniteMeasureSpace::uniform(3), vec![MeasurePreservingMap::identity(3)]).unwrap();
        assert_eq!(conditional_expectation(&id, &[0], &[0.5, -1.0, 2.0]).unwrap(), vec![0.5, -1.0, 2.0]);

        // blocks {0,1} and {2}
        let two_block =
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(3), vec![vec![1, 0, 2]]).unwrap();
        assert_eq!(conditional_expectation(&two_block, &[0], &[0.0, 6.0, 3.0]).unwrap(), vec![3.0, 3.0, 3.0]);
        assert!(matches!(
            conditional_expectation(&two_block, &[0], &[1.0]),
            Err(DynamicsError::FunctionLength { expected: 3, found: 1 })
        ));
    }
}
