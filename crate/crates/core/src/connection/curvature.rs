use crate::jet::Jet;
use crate::tensor::Tensor4;

use super::{Connection, CurvatureField};

/// `R[i][j][k][l] = ∂_i Γ[j][k][l] − ∂_j Γ[i][k][l] + Σ_n (Γ[i][n][l] Γ[j][k][n] − Γ[j][n][l] Γ[i][k][n])`,
/// valid through degree `D − 1`.
pub fn curvature(nabla: &Connection) -> CurvatureField {
    let m = nabla.dim();
    let valid = nabla.order() - 1;
    let g = nabla.truncated(valid);
    let g_at = |i: usize, j: usize, k: usize| &g[(i * m + j) * m + k];

    // dg[(s, i, j, k)] = ∂_s Γ[i][j][k]; symmetric in (i, j)
    let mut dg = vec![Jet::zero(m, valid); m * m * m * m];
    for s in 0..m {
        for i in 0..m {
            for j in i..m {
                for k in 0..m {
                    let d = nabla.gamma(i, j, k).partial(s);
                    dg[((s * m + j) * m + i) * m + k] = d.clone();
                    dg[((s * m + i) * m + j) * m + k] = d;
                }
            }
        }
    }
    let dg_at = |s: usize, i: usize, j: usize, k: usize| &dg[((s * m + i) * m + j) * m + k];

    // q[(i, l, j, k)] = Σ_n Γ[i][n][l] Γ[j][k][n]
    let mut q = vec![Jet::zero(m, valid); m * m * m * m];
    for i in 0..m {
        for l in 0..m {
            for j in 0..m {
                for k in j..m {
                    let mut acc = Jet::zero(m, valid);
                    for n in 0..m {
                        acc.add_product(g_at(i, n, l), g_at(j, k, n));
                    }
                    q[((i * m + l) * m + k) * m + j] = acc.clone();
                    q[((i * m + l) * m + j) * m + k] = acc;
                }
            }
        }
    }
    let q_at = |i: usize, l: usize, j: usize, k: usize| &q[((i * m + l) * m + j) * m + k];

    let mut r = Tensor4::from_fn(m, |_, _, _, _| Jet::zero(m, valid));
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                for l in 0..m {
                    let mut v = dg_at(i, j, k, l) - dg_at(j, i, k, l);
                    v = &v + q_at(i, l, j, k);
                    v = &v - q_at(j, l, i, k);
                    r.set(j, i, k, l, -&v);
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    CurvatureField::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn flat_connection_is_flat() {
        let r = curvature(&Connection::flat(3, 4).unwrap());
        assert!(r.is_zero());
        assert_eq!(r.valid_order(), 3);
    }

    #[test]
    fn constant_symbol_gives_quadratic_terms_only() {
        // Γ[0][0][1] = Γ[1][1][0] = 1, everything else zero. Expanding the
        // ΓΓ terms by hand leaves exactly four nonzero components.
        let m = 3;
        let nabla = Connection::from_fn(m, 3, |i, j, k| {
            let on = matches!((i, j, k), (0, 0, 1) | (1, 1, 0));
            Jet::constant(m, 3, int(i64::from(on)))
        })
        .unwrap();
        let r = curvature(&nabla);
        for ([i, j, k, l], v) in r.tensor().entries() {
            let expected = match (i, j, k, l) {
                (0, 1, 1, 1) | (1, 0, 0, 0) => 1,
                (1, 0, 1, 1) | (0, 1, 0, 0) => -1,
                _ => 0,
            };
            assert_eq!(v, &Jet::constant(m, 2, int(expected)), "at {:?}", (i, j, k, l));
        }
    }
}
