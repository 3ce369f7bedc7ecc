//! Covariant derivative of curvature and the second Bianchi identity.
//!
//! Convention (fixed here, any consistent one satisfies the identity):
//! `R[i][j][k][l; s] = ∂_s R[i][j][k][l] + Γ[s][n][l] R[i][j][k][n]
//!   − Γ[s][i][n] R[n][j][k][l] − Γ[s][j][n] R[i][n][k][l] − Γ[s][k][n] R[i][j][n][l]`.

use crate::jet::Jet;
use crate::witness::{self, JetWitness};

use super::{Connection, CurvatureField};

/// Five-index jet array `[i][j][k][l][s]`, valid through `D − 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureDerivative {
    m: usize,
    valid_order: u32,
    data: Vec<Jet>,
}

impl CurvatureDerivative {
    fn idx(&self, [i, j, k, l, s]: [usize; 5]) -> usize {
        (((i * self.m + j) * self.m + k) * self.m + l) * self.m + s
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn valid_order(&self) -> u32 {
        self.valid_order
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize, s: usize) -> &Jet {
        &self.data[self.idx([i, j, k, l, s])]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Jet::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<JetWitness> {
        let m = self.m;
        witness::first_nonzero(self.data.iter().enumerate().map(|(n, v)| {
            let idx = vec![
                n / (m * m * m * m),
                (n / (m * m * m)) % m,
                (n / (m * m)) % m,
                (n / m) % m,
                n % m,
            ];
            (idx, v)
        }))
    }
}

pub fn covariant_derivative_curvature(nabla: &Connection, r: &CurvatureField) -> CurvatureDerivative {
    let m = nabla.dim();
    assert_eq!(r.dim(), m);
    let valid = r.valid_order() - 1;
    let g = nabla.truncated(valid);
    let g_at = |i: usize, j: usize, k: usize| &g[(i * m + j) * m + k];
    let rt: Vec<Jet> = r.tensor().entries().map(|(_, v)| v.truncate(valid)).collect();
    let r_at = |i: usize, j: usize, k: usize, l: usize| &rt[((i * m + j) * m + k) * m + l];

    let mut out = CurvatureDerivative {
        m,
        valid_order: valid,
        data: vec![Jet::zero(m, valid); m.pow(5)],
    };
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                for l in 0..m {
                    for s in 0..m {
                        let mut plus = Jet::zero(m, valid);
                        let mut minus = Jet::zero(m, valid);
                        for n in 0..m {
                            plus.add_product(g_at(s, n, l), r_at(i, j, k, n));
                            minus.add_product(g_at(s, i, n), r_at(n, j, k, l));
                            minus.add_product(g_at(s, j, n), r_at(i, n, k, l));
                            minus.add_product(g_at(s, k, n), r_at(i, j, n, l));
                        }
                        let v = &(&r.get(i, j, k, l).partial(s) + &plus) - &minus;
                        let a = out.idx([j, i, k, l, s]);
                        out.data[a] = -&v;
                        let b = out.idx([i, j, k, l, s]);
                        out.data[b] = v;
                    }
                }
            }
        }
    }
    out
}

/// Cyclic sum `R[i][j][k][l; s] + R[j][s][k][l; i] + R[s][i][k][l; j]`,
/// indexed `[i][j][k][l][s]`.
pub fn second_bianchi_residual(nabla: &Connection) -> CurvatureDerivative {
    let r = super::curvature(nabla);
    let dr = covariant_derivative_curvature(nabla, &r);
    let m = nabla.dim();
    let mut data = Vec::with_capacity(m.pow(5));
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    for s in 0..m {
                        let v = &(dr.get(i, j, k, l, s) + dr.get(j, s, k, l, i)) + dr.get(s, i, k, l, j);
                        data.push(v);
                    }
                }
            }
        }
    }
    CurvatureDerivative {
        m,
        valid_order: dr.valid_order,
        data,
    }
}
