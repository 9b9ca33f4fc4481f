//! Independent floating-point verifier for exact certificates.
//!
//! Builds the symmetric normalized Laplacian, eigendecomposes it with cyclic
//! Jacobi rotations, and evaluates walk fidelities `|U(t)_{a,b}|^2`. Nothing
//! here feeds back into decisions: the oracle accepts or rejects
//! certificates, and a disagreement is a defect, not a fallback path.

use std::io::{self, Write};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graphs::{Graph, GraphError};
use crate::transfer::{PeriodicityOutcome, PeriodicityVerdict, PstOutcome, PstVerdict};

const SYMMETRY_TOL: f64 = 1e-14;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("asymmetry {delta:e} at ({i}, {j}) exceeds the 1e-14 tolerance")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("Jacobi sweep limit reached with off-diagonal mass {off:e}")]
    NoConvergence { off: f64 },
    #[error("verdict is negative; only positive certificates can be verified")]
    NegativeVerdict,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Dense symmetric matrix of floats, row-major.
#[derive(Debug, Clone)]
pub struct FloatMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Eigendecomposition with eigenvalues ascending; column `r` of `vectors`
/// is the unit eigenvector for `eigenvalues[r]`.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub eigenvalues: Vec<f64>,
    pub vectors: FloatMatrix,
}

/// Fidelity samples over a uniform time grid, with the grid maximum.
#[derive(Debug, Clone)]
pub struct FidelityCurve {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub max: f64,
    pub argmax: f64,
}

/// `L = D^{-1/2} L D^{-1/2}`: unit diagonal, `-1/sqrt(d_a d_b)` on edges.
pub fn normalized_laplacian_float(g: &Graph) -> Result<FloatMatrix, GraphError> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(GraphError::IsolatedVertex(v));
    }
    let mut data = vec![0.0; n * n];
    for a in 0..n {
        data[a * n + a] = 1.0;
        for &b in g.neighbors(a) {
            data[a * n + b] = -1.0 / ((g.degree(a) as f64) * (g.degree(b) as f64)).sqrt();
        }
    }
    Ok(FloatMatrix { n, data })
}

fn off_diagonal_mass(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi eigensolver; sweeps until the off-diagonal Frobenius mass
/// drops below 1e-13, hard failure after 100 sweeps.
pub fn sym_eig(m: &FloatMatrix) -> Result<SymEig, OracleError> {
    let n = m.n;
    for i in 0..n {
        for j in i + 1..n {
            let delta = (m.get(i, j) - m.get(j, i)).abs();
            if delta > SYMMETRY_TOL {
                return Err(OracleError::NotSymmetric { i, j, delta });
            }
        }
    }
    let mut a = m.data.clone();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a, n) < OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[p * n + r];
                if apr == 0.0 {
                    continue;
                }
                let tau = (a[r * n + r] - a[p * n + p]) / (2.0 * apr);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akr = a[k * n + r];
                    a[k * n + p] = c * akp - s * akr;
                    a[k * n + r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let ark = a[r * n + k];
                    a[p * n + k] = c * apk - s * ark;
                    a[r * n + k] = s * apk + c * ark;
                }
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkr = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkr;
                    q[k * n + r] = s * qkp + c * qkr;
                }
            }
        }
    }
    if !converged && off_diagonal_mass(&a, n) >= OFF_DIAGONAL_TOL {
        return Err(OracleError::NoConvergence {
            off: off_diagonal_mass(&a, n),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new_col] = q[k * n + old_col];
        }
    }
    Ok(SymEig {
        eigenvalues,
        vectors: FloatMatrix { n, data: vectors },
    })
}

/// `|U(t)_{a,b}|^2` with `U(t) = exp(it L)`, via the eigenbasis.
pub fn fidelity(eig: &SymEig, a: usize, b: usize, t: f64) -> f64 {
    let n = eig.vectors.n;
    let mut re = 0.0;
    let mut im = 0.0;
    for r in 0..n {
        let w = eig.vectors.get(a, r) * eig.vectors.get(b, r);
        let phase = eig.eigenvalues[r] * t;
        re += phase.cos() * w;
        im += phase.sin() * w;
    }
    re * re + im * im
}

/// Exact certificate to verify numerically.
pub enum Certificate<'a> {
    Pst(&'a PstVerdict),
    Periodicity(&'a PeriodicityVerdict),
}

/// Residual of a positive certificate: `1 - |U(tau)_{a,b}|^2` for transfer,
/// `1 - |U(tau)_{a,a}|^2` for periodicity. Acceptance threshold is the
/// caller's; certificates from the exact engine sit far below 1e-9.
pub fn verify_certificate(g: &Graph, certificate: Certificate) -> Result<f64, OracleError> {
    let eig = sym_eig(&normalized_laplacian_float(g)?)?;
    let (a, b, tau_pi) = match certificate {
        Certificate::Pst(v) => match &v.outcome {
            PstOutcome::Pst(cert) => (v.a, v.b, &cert.tau_pi),
            PstOutcome::NoPst { .. } => return Err(OracleError::NegativeVerdict),
        },
        Certificate::Periodicity(v) => match &v.outcome {
            PeriodicityOutcome::Periodic(cert) => (v.vertex, v.vertex, &cert.tau_pi),
            PeriodicityOutcome::NotPeriodic { .. } => return Err(OracleError::NegativeVerdict),
        },
    };
    let tau = tau_pi.to_f64().expect("certificate times are modest") * std::f64::consts::PI;
    Ok(1.0 - fidelity(&eig, a, b, tau))
}

/// Fidelity on `steps >= 2` uniform points over `[0, t_max]`, tracking the
/// grid maximum (first index on ties).
pub fn fidelity_scan(
    g: &Graph,
    a: usize,
    b: usize,
    t_max: f64,
    steps: usize,
) -> Result<FidelityCurve, OracleError> {
    assert!(steps >= 2, "a scan needs at least the two endpoints");
    let eig = sym_eig(&normalized_laplacian_float(g)?)?;
    let mut times = Vec::with_capacity(steps);
    let mut fidelities = Vec::with_capacity(steps);
    let (mut max, mut argmax) = (f64::NEG_INFINITY, 0.0);
    for i in 0..steps {
        let t = t_max * (i as f64) / ((steps - 1) as f64);
        let f = fidelity(&eig, a, b, t);
        if f > max {
            max = f;
            argmax = t;
        }
        times.push(t);
        fidelities.push(f);
    }
    Ok(FidelityCurve {
        times,
        fidelities,
        max,
        argmax,
    })
}

/// CSV with header `t,fidelity`, 17 significant digits, LF endings.
pub fn write_csv(curve: &FidelityCurve, out: &mut impl Write) -> io::Result<()> {
    out.write_all(b"t,fidelity\n")?;
    for (t, f) in curve.times.iter().zip(&curve.fidelities) {
        writeln!(out, "{t:.16e},{f:.16e}")?;
    }
    Ok(())
}
