//! Spectral analysis of the random-walk Laplacian `M = D^{-1} L`.
//!
//! `M` is similar to the symmetric normalized Laplacian via `D^{1/2}`, so
//! spectra, vertex supports, and cospectrality agree between the two; all
//! computation happens on the rational side.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactq::{poly_gcd, RatPoly};
use crate::exactq::{rational_roots_bounded, Rational};
use crate::graphs::{Graph, GraphError};
use crate::linalg::{char_poly, local_min_poly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectraError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex pair must be distinct, got {0} twice")]
    SameVertex(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Eigenvalue support of one vertex: the local minimal polynomial of `|a>`
/// under `M`, split into rational roots and the rational-root-free remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralProfile {
    pub vertex: usize,
    /// Monic and squarefree; product of the two parts below.
    pub local_poly: RatPoly,
    pub rational_support: BTreeSet<Rational>,
    /// Monic; degree 0 iff the support is fully rational.
    pub irrational_remainder: RatPoly,
}

/// One signed half of a joint eigenvalue support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSupport {
    pub rational: BTreeSet<Rational>,
    /// Monic, rational-root-free; degree 0 iff this half is fully rational.
    pub irrational: RatPoly,
}

impl SignedSupport {
    /// Eigenvalue count, an irrational factor of degree d contributing d.
    pub fn size(&self) -> usize {
        self.rational.len() + self.irrational.degree().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.degree() == Some(0)
    }

    fn from_poly(p: &RatPoly) -> Self {
        let (roots, remainder) = rational_roots_bounded(p, Some(spectral_window()))
            .expect("local minimal polynomials are nonzero");
        debug_assert!(roots.values().all(|&m| m == 1), "supports are squarefree");
        SignedSupport {
            rational: roots.into_keys().collect(),
            irrational: remainder,
        }
    }
}

/// Joint support of a strongly cospectral pair, split by projection sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportClassification {
    pub a: usize,
    pub b: usize,
    /// Support of `|a> + |b>`; always contains 0.
    pub s_plus: SignedSupport,
    /// Support of `|a> - |b>`; disjoint from `s_plus`.
    pub s_minus: SignedSupport,
}

/// Spectrum of `M = D^{-1} L` lies in `[0, 2]`.
fn spectral_window() -> (&'static Rational, &'static Rational) {
    use std::sync::OnceLock;
    static WINDOW: OnceLock<(Rational, Rational)> = OnceLock::new();
    let (lo, hi) = WINDOW.get_or_init(|| (Rational::zero(), Rational::from_integer(2.into())));
    (lo, hi)
}

/// Full spectrum of `M`: rational eigenvalues with multiplicity, plus the
/// rational-root-free factor of the characteristic polynomial.
///
/// Needs every degree positive; connectivity is not required.
pub fn graph_spectrum(g: &Graph) -> Result<(BTreeMap<Rational, usize>, RatPoly), SpectraError> {
    let m = g.rw_laplacian()?;
    let p = char_poly(&m);
    Ok(rational_roots_bounded(&p, Some(spectral_window()))
        .expect("characteristic polynomials are nonzero"))
}

/// Eigenvalue support of vertex `a`; requires `G` connected.
pub fn vertex_profile(g: &Graph, a: usize) -> Result<SpectralProfile, SpectraError> {
    assert!(a < g.n(), "vertex out of range");
    if !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    let m = g.rw_laplacian()?;
    let mut e = vec![Rational::zero(); g.n()];
    e[a] = Rational::one();
    let p = local_min_poly(&m, &e).expect("basis vectors are nonzero");
    let support = SignedSupport::from_poly(&p);
    debug_assert!(
        support.rational.contains(&Rational::zero()),
        "the stationary projection has positive diagonal"
    );
    Ok(SpectralProfile {
        vertex: a,
        local_poly: p,
        rational_support: support.rational,
        irrational_remainder: support.irrational,
    })
}

/// Scaled return counts `l^k [(D^{-1}A)^k]_{a,a}` for `k = 0..=kmax`, where
/// `l` is the lcm of the degrees; exact integers.
fn scaled_return_counts(g: &Graph, a: usize, kmax: usize) -> Vec<BigInt> {
    let n = g.n();
    assert!(
        kmax == 0 || (0..n).all(|v| g.degree(v) > 0),
        "walks need every degree positive"
    );
    let l: BigInt = (0..n).fold(BigInt::one(), |acc, v| {
        if g.degree(v) > 0 {
            acc.lcm(&BigInt::from(g.degree(v)))
        } else {
            acc
        }
    });
    let weight: Vec<BigInt> = (0..n)
        .map(|v| {
            if g.degree(v) > 0 {
                &l / BigInt::from(g.degree(v))
            } else {
                BigInt::zero()
            }
        })
        .collect();
    let mut u = vec![BigInt::zero(); n];
    u[a] = BigInt::one();
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(u[a].clone());
    for _ in 0..kmax {
        let mut next = vec![BigInt::zero(); n];
        for v in 0..n {
            if u[v].is_zero() {
                continue;
            }
            let step = &u[v] * &weight[v];
            for &w in g.neighbors(v) {
                next[w] += &step;
            }
        }
        u = next;
        out.push(u[a].clone());
    }
    out
}

/// Exact return probabilities `[(D^{-1}A)^k]_{a,a}` for `k = 0..=kmax`.
pub fn rw_return_probabilities(g: &Graph, a: usize, kmax: usize) -> Vec<Rational> {
    let l: BigInt = (0..g.n()).fold(BigInt::one(), |acc, v| {
        if g.degree(v) > 0 {
            acc.lcm(&BigInt::from(g.degree(v)))
        } else {
            acc
        }
    });
    let mut scale = BigInt::one();
    scaled_return_counts(g, a, kmax)
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            if k > 0 {
                scale *= &l;
            }
            Rational::new(count, scale.clone())
        })
        .collect()
}

/// Walk signature deciding cospectrality: degree, then scaled return counts
/// for `k = 2..=n-1` (`k = 0, 1` are constant across vertices).
fn walk_signature(g: &Graph, a: usize) -> Vec<BigInt> {
    let mut sig = vec![BigInt::from(g.degree(a))];
    sig.extend(scaled_return_counts(g, a, g.n().saturating_sub(1)).split_off(2.min(g.n())));
    sig
}

/// True iff `(M^k)_{a,a} = (M^k)_{b,b}` for all `k <= n-1`.
///
/// Computed on `D^{-1}A` powers: `M = I - D^{-1}A`, and the binomial change
/// of basis is triangular, so the two diagonal families determine each other.
pub fn are_cospectral(g: &Graph, a: usize, b: usize) -> bool {
    if a == b {
        return true;
    }
    walk_signature(g, a) == walk_signature(g, b)
}

/// Partition of the vertices into cospectrality classes, each sorted, the
/// list ordered by smallest member.
pub fn cospectral_classes(g: &Graph) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        groups.entry(walk_signature(g, v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Inner decision with refusal witnesses, shared by the transfer pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ScOutcome {
    Classified(SupportClassification),
    DegreeMismatch {
        a_degree: usize,
        b_degree: usize,
    },
    /// Nonconstant gcd of the two local minimal polynomials.
    SharedFactor(RatPoly),
}

pub(crate) fn sc_classify(g: &Graph, a: usize, b: usize) -> Result<ScOutcome, SpectraError> {
    assert!(a < g.n() && b < g.n(), "vertex out of range");
    if a == b {
        return Err(SpectraError::SameVertex(a));
    }
    if !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    // Mandatory: the D^{1/2} similarity rescales |a>, |b> by the same factor
    // only when the degrees agree; without this the gcd criterion below
    // would answer a different question.
    if g.degree(a) != g.degree(b) {
        return Ok(ScOutcome::DegreeMismatch {
            a_degree: g.degree(a),
            b_degree: g.degree(b),
        });
    }
    let m = g.rw_laplacian()?;
    let n = g.n();
    let vec_pair = |sign: i64| {
        let mut v = vec![Rational::zero(); n];
        v[a] = Rational::one();
        v[b] = Rational::from_integer(sign.into());
        v
    };
    let p_minus = local_min_poly(&m, &vec_pair(-1)).expect("a != b");
    let p_plus = local_min_poly(&m, &vec_pair(1)).expect("a != b");
    let shared = poly_gcd(&p_minus, &p_plus).expect("minimal polynomials are nonzero");
    if shared.degree() != Some(0) {
        return Ok(ScOutcome::SharedFactor(shared));
    }
    let s_plus = SignedSupport::from_poly(&p_plus);
    let s_minus = SignedSupport::from_poly(&p_minus);
    debug_assert!(s_plus.rational.contains(&Rational::zero()));
    Ok(ScOutcome::Classified(SupportClassification {
        a,
        b,
        s_plus,
        s_minus,
    }))
}

/// Decides strong cospectrality of `a != b`; `Some` carries the signed
/// support split, `None` means the pair is not strongly cospectral.
pub fn are_strongly_cospectral(
    g: &Graph,
    a: usize,
    b: usize,
) -> Result<Option<SupportClassification>, SpectraError> {
    Ok(match sc_classify(g, a, b)? {
        ScOutcome::Classified(c) => Some(c),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{rat, rat_int};

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for j in 1..n {
            for i in 0..j {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn set(vals: &[Rational]) -> BTreeSet<Rational> {
        vals.iter().cloned().collect()
    }

    #[test]
    fn profiles_of_small_graphs() {
        let p3 = path(3);
        let end = vertex_profile(&p3, 0).unwrap();
        assert_eq!(
            end.rational_support,
            set(&[rat_int(0), rat_int(1), rat_int(2)])
        );
        assert_eq!(end.irrational_remainder, RatPoly::one());
        let mid = vertex_profile(&p3, 1).unwrap();
        assert_eq!(mid.rational_support, set(&[rat_int(0), rat_int(2)]));

        let k3 = complete(3);
        let v = vertex_profile(&k3, 0).unwrap();
        assert_eq!(v.rational_support, set(&[rat_int(0), rat(3, 2)]));
        assert_eq!(v.irrational_remainder, RatPoly::one());
    }

    #[test]
    fn profile_with_irrational_remainder() {
        // P5 spectrum: {0, 1, 2} plus the roots of x^2 - 2x + 1/2
        let p5 = path(5);
        let end = vertex_profile(&p5, 0).unwrap();
        assert_eq!(
            end.rational_support,
            set(&[rat_int(0), rat_int(1), rat_int(2)])
        );
        assert_eq!(
            end.irrational_remainder,
            RatPoly::new(vec![rat(1, 2), rat_int(-2), rat_int(1)])
        );
        assert_eq!(end.local_poly.degree(), Some(5));
    }

    #[test]
    fn profile_requires_connected() {
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            vertex_profile(&split, 0).unwrap_err(),
            SpectraError::Disconnected
        );
    }

    #[test]
    fn graph_spectrum_of_p4() {
        let (roots, rem) = graph_spectrum(&path(4)).unwrap();
        let expected: Vec<(Rational, usize)> = vec![
            (rat_int(0), 1),
            (rat(1, 2), 1),
            (rat(3, 2), 1),
            (rat_int(2), 1),
        ];
        assert_eq!(roots.into_iter().collect::<Vec<_>>(), expected);
        assert_eq!(rem, RatPoly::one());
    }

    #[test]
    fn return_probabilities_exact() {
        let k2 = complete(2);
        assert_eq!(
            rw_return_probabilities(&k2, 0, 4),
            vec![rat_int(1), rat_int(0), rat_int(1), rat_int(0), rat_int(1)]
        );
        let p3 = path(3);
        assert_eq!(
            rw_return_probabilities(&p3, 0, 2),
            vec![rat_int(1), rat_int(0), rat(1, 2)]
        );
    }

    #[test]
    fn cospectrality_of_path_vertices() {
        let p3 = path(3);
        assert!(are_cospectral(&p3, 0, 2));
        assert!(!are_cospectral(&p3, 0, 1));
        assert!(are_cospectral(&p3, 1, 1));
        assert_eq!(cospectral_classes(&p3), vec![vec![0, 2], vec![1]]);
        assert_eq!(cospectral_classes(&path(4)), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(cospectral_classes(&complete(3)), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn strong_cospectrality_p3_ends() {
        let cls = are_strongly_cospectral(&path(3), 0, 2).unwrap().unwrap();
        assert_eq!(cls.s_plus.rational, set(&[rat_int(0), rat_int(2)]));
        assert_eq!(cls.s_minus.rational, set(&[rat_int(1)]));
        assert!(cls.s_plus.is_rational());
        assert!(cls.s_minus.is_rational());
        assert_eq!(cls.s_plus.size(), 2);
        assert_eq!(cls.s_minus.size(), 1);
    }

    #[test]
    fn strong_cospectrality_k2() {
        let cls = are_strongly_cospectral(&complete(2), 0, 1)
            .unwrap()
            .unwrap();
        assert_eq!(cls.s_plus.rational, set(&[rat_int(0)]));
        assert_eq!(cls.s_minus.rational, set(&[rat_int(2)]));
    }

    #[test]
    fn degree_mismatch_is_not_strongly_cospectral() {
        assert_eq!(are_strongly_cospectral(&path(3), 0, 1).unwrap(), None);
        assert_eq!(
            sc_classify(&path(3), 0, 1).unwrap(),
            ScOutcome::DegreeMismatch {
                a_degree: 1,
                b_degree: 2
            }
        );
    }

    #[test]
    fn k3_pair_shares_a_factor() {
        let outcome = sc_classify(&complete(3), 0, 1).unwrap();
        match outcome {
            ScOutcome::SharedFactor(p) => {
                assert_eq!(p, RatPoly::new(vec![rat(-3, 2), rat_int(1)]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(are_strongly_cospectral(&complete(3), 0, 1).unwrap(), None);
    }

    #[test]
    fn p4_end_pair_split() {
        let cls = are_strongly_cospectral(&path(4), 0, 3).unwrap().unwrap();
        assert_eq!(cls.s_plus.rational, set(&[rat_int(0), rat(3, 2)]));
        assert_eq!(cls.s_minus.rational, set(&[rat(1, 2), rat_int(2)]));
    }

    #[test]
    fn p5_end_pair_has_irrational_minus_side() {
        let cls = are_strongly_cospectral(&path(5), 0, 4).unwrap().unwrap();
        assert_eq!(
            cls.s_plus.rational,
            set(&[rat_int(0), rat_int(1), rat_int(2)])
        );
        assert!(cls.s_plus.is_rational());
        assert!(cls.s_minus.rational.is_empty());
        assert_eq!(
            cls.s_minus.irrational,
            RatPoly::new(vec![rat(1, 2), rat_int(-2), rat_int(1)])
        );
        assert_eq!(cls.s_minus.size(), 2);
    }

    #[test]
    fn same_vertex_rejected() {
        assert_eq!(
            are_strongly_cospectral(&path(3), 1, 1).unwrap_err(),
            SpectraError::SameVertex(1)
        );
    }
}
