//! Periodicity and perfect-state-transfer decisions with exact certificates.
//!
//! Times are exact rational coefficients of pi; nothing here touches floats.
//! The verification oracle converts certificates at the last moment.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactq::{gcd_scaled, lcm_denominators, RatPoly, Rational};
use crate::graphs::Graph;
use crate::spectra::{
    cospectral_classes, sc_classify, vertex_profile, ScOutcome, SpectraError, SupportClassification,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One support eigenvalue with its sign class and parity datum `m*theta/g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityRow {
    pub theta: Rational,
    pub sign: Sign,
    pub scaled: BigInt,
    pub even: bool,
}

/// Exact period: `tau = tau_pi * pi` with `tau_pi = 2m/g` reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub m: BigInt,
    pub g: BigInt,
    pub tau_pi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicityOutcome {
    Periodic(PeriodicityCertificate),
    /// The support has this rational-root-free factor.
    NotPeriodic {
        witness: RatPoly,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityVerdict {
    pub vertex: usize,
    pub outcome: PeriodicityOutcome,
}

/// Exact transfer time: `tau = tau_pi * pi` with `tau_pi = m/g` reduced,
/// half the periodicity coefficient. Every support eigenvalue appears in the
/// parity table; sign `+` pairs with even `m*theta/g`, sign `-` with odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PstCertificate {
    pub m: BigInt,
    pub g: BigInt,
    pub tau_pi: Rational,
    pub parity_table: Vec<ParityRow>,
    pub classification: SupportClassification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RefusalReason {
    NotCospectral,
    NotStronglyCospectral,
    IrrationalSupport,
    ParityFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefusalWitness {
    DegreeMismatch {
        a_degree: usize,
        b_degree: usize,
    },
    /// Nonconstant gcd of the two local minimal polynomials.
    SharedFactor(RatPoly),
    /// Rational-root-free factors of the signed supports.
    IrrationalRemainder {
        s_plus: RatPoly,
        s_minus: RatPoly,
    },
    /// Support eigenvalue whose parity disagrees with its sign class.
    ParityOffender {
        theta: Rational,
        scaled: BigInt,
        sign: Sign,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PstOutcome {
    Pst(PstCertificate),
    NoPst {
        reason: RefusalReason,
        witness: RefusalWitness,
    },
}

/// Pair verdict; `a < b` regardless of argument order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PstVerdict {
    pub a: usize,
    pub b: usize,
    pub outcome: PstOutcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefusalCounts {
    pub not_cospectral: usize,
    pub not_strongly_cospectral: usize,
    pub irrational_support: usize,
    pub parity_failure: usize,
}

impl RefusalCounts {
    pub fn total(&self) -> usize {
        self.not_cospectral
            + self.not_strongly_cospectral
            + self.irrational_support
            + self.parity_failure
    }

    fn bump(&mut self, reason: RefusalReason) {
        match reason {
            RefusalReason::NotCospectral => self.not_cospectral += 1,
            RefusalReason::NotStronglyCospectral => self.not_strongly_cospectral += 1,
            RefusalReason::IrrationalSupport => self.irrational_support += 1,
            RefusalReason::ParityFailure => self.parity_failure += 1,
        }
    }
}

/// Positive verdicts sorted by `(a, b)`, plus refusal counts over all pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PstSurvey {
    pub transfers: Vec<PstVerdict>,
    pub refusals: RefusalCounts,
}

/// `m` = lcm of support denominators, `g` = gcd of the scaled support;
/// zero entries are neutral in the gcd.
fn support_scaling(support: &[Rational]) -> (BigInt, BigInt) {
    let m = lcm_denominators(support).expect("supports are nonempty");
    let g = gcd_scaled(support, &m).expect("scaling is exact by construction");
    debug_assert!(g > BigInt::zero(), "supports reach beyond theta = 0");
    (m, g)
}

/// Periodicity at `a`: periodic iff the support is fully rational, with
/// period `(2m/g) pi`.
pub fn decide_periodic(g: &Graph, a: usize) -> Result<PeriodicityVerdict, SpectraError> {
    let profile = vertex_profile(g, a)?;
    if profile.irrational_remainder.degree() != Some(0) {
        return Ok(PeriodicityVerdict {
            vertex: a,
            outcome: PeriodicityOutcome::NotPeriodic {
                witness: profile.irrational_remainder,
            },
        });
    }
    let support: Vec<Rational> = profile.rational_support.iter().cloned().collect();
    let (m, scale_gcd) = support_scaling(&support);
    let tau_pi = Rational::new(BigInt::from(2) * &m, scale_gcd.clone());
    Ok(PeriodicityVerdict {
        vertex: a,
        outcome: PeriodicityOutcome::Periodic(PeriodicityCertificate {
            m,
            g: scale_gcd,
            tau_pi,
        }),
    })
}

/// PST decision given an established strong-cospectrality classification.
///
/// Checks rationality of both signed supports, then the parity condition
/// `theta in S+ iff m*theta/g even` over the joint support.
pub(crate) fn pst_from_classification(cls: SupportClassification) -> PstOutcome {
    if !cls.s_plus.is_rational() || !cls.s_minus.is_rational() {
        return PstOutcome::NoPst {
            reason: RefusalReason::IrrationalSupport,
            witness: RefusalWitness::IrrationalRemainder {
                s_plus: cls.s_plus.irrational.clone(),
                s_minus: cls.s_minus.irrational.clone(),
            },
        };
    }
    let mut support: Vec<Rational> = cls
        .s_plus
        .rational
        .iter()
        .chain(cls.s_minus.rational.iter())
        .cloned()
        .collect();
    support.sort();
    let (m, g) = support_scaling(&support);
    let mut parity_table = Vec::with_capacity(support.len());
    for theta in support {
        let sign = if cls.s_plus.rational.contains(&theta) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let scaled_m = (&theta * Rational::from(m.clone())).to_integer();
        let (scaled, rem) = scaled_m.div_rem(&g);
        debug_assert!(rem.is_zero(), "g divides every scaled eigenvalue");
        let even = scaled.is_even();
        if (sign == Sign::Plus) != even {
            return PstOutcome::NoPst {
                reason: RefusalReason::ParityFailure,
                witness: RefusalWitness::ParityOffender {
                    theta,
                    scaled,
                    sign,
                },
            };
        }
        parity_table.push(ParityRow {
            theta,
            sign,
            scaled,
            even,
        });
    }
    let tau_pi = Rational::new(m.clone(), g.clone());
    PstOutcome::Pst(PstCertificate {
        m,
        g,
        tau_pi,
        parity_table,
        classification: cls,
    })
}

fn decide_pair(g: &Graph, a: usize, b: usize) -> Result<PstOutcome, SpectraError> {
    Ok(match sc_classify(g, a, b)? {
        ScOutcome::DegreeMismatch { a_degree, b_degree } => PstOutcome::NoPst {
            reason: RefusalReason::NotCospectral,
            witness: RefusalWitness::DegreeMismatch { a_degree, b_degree },
        },
        ScOutcome::SharedFactor(p) => PstOutcome::NoPst {
            reason: RefusalReason::NotStronglyCospectral,
            witness: RefusalWitness::SharedFactor(p),
        },
        ScOutcome::Classified(cls) => pst_from_classification(cls),
    })
}

/// Full PST pipeline for one pair: strong cospectrality, support
/// rationality, parity. The verdict is symmetric in `a`, `b` verbatim.
pub fn decide_pst(g: &Graph, a: usize, b: usize) -> Result<PstVerdict, SpectraError> {
    let (a, b) = (a.min(b), a.max(b));
    Ok(PstVerdict {
        a,
        b,
        outcome: decide_pair(g, a, b)?,
    })
}

/// Surveys all unordered pairs: positive verdicts plus refusal counts.
///
/// Pairs in different cospectrality classes are refused wholesale; the full
/// pipeline runs only within classes.
pub fn all_pst_pairs(g: &Graph) -> Result<PstSurvey, SpectraError> {
    if !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    let classes = cospectral_classes(g);
    let n = g.n();
    let within: usize = classes.iter().map(|c| c.len() * (c.len() - 1) / 2).sum();
    let mut refusals = RefusalCounts {
        not_cospectral: n * (n - 1) / 2 - within,
        ..RefusalCounts::default()
    };

    let mut candidates: Vec<(usize, usize)> = Vec::with_capacity(within);
    for class in &classes {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                candidates.push((a, b));
            }
        }
    }
    candidates.sort_unstable();

    #[cfg(feature = "parallel")]
    let outcomes: Result<Vec<PstOutcome>, SpectraError> = {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .map(|&(a, b)| decide_pair(g, a, b))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Result<Vec<PstOutcome>, SpectraError> = candidates
        .iter()
        .map(|&(a, b)| decide_pair(g, a, b))
        .collect();

    let mut transfers = Vec::new();
    for ((a, b), outcome) in candidates.into_iter().zip(outcomes?) {
        match outcome {
            PstOutcome::Pst(_) => transfers.push(PstVerdict { a, b, outcome }),
            PstOutcome::NoPst { reason, .. } => refusals.bump(reason),
        }
    }
    Ok(PstSurvey {
        transfers,
        refusals,
    })
}
