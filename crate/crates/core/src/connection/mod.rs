//! Torsion-free connections on a coordinate ball with jet Christoffel
//! symbols, and the tensor fields derived from them.
//!
//! Component conventions: `∇_{∂_i} ∂_j = Γ[i][j][k] ∂_k`,
//! `R(∂_i, ∂_j) ∂_k = R[i][j][k][l] ∂_l` with
//! `R[i][j][k][l] = ∂_i Γ[j][k][l] − ∂_j Γ[i][k][l] + Γ[i][n][l] Γ[j][k][n] − Γ[j][n][l] Γ[i][k][n]`.
//! A connection of order `D` has curvature valid through degree `D − 1`
//! and covariant derivative of curvature valid through `D − 2`; every
//! derived field is stored truncated at its valid order.

mod bianchi;
mod curvature;
mod forms;

use thiserror::Error;

use crate::algebra::{AlgebraError, CurvatureOp, MIN_DIMENSION};
use crate::jet::{Jet, JetPoint};
use crate::rational::Rational;
use crate::tensor::{self, Tensor2, Tensor4};
use crate::witness::{self, JetWitness};

pub use bianchi::{covariant_derivative_curvature, second_bianchi_residual, CurvatureDerivative};
pub use curvature::curvature;
pub use forms::{d_one_form, trace_form_identity_residual, trace_one_form, volume_potential, NotClosed};

/// Smallest connection order: curvature and its covariant derivative both
/// need at least one trustworthy degree.
pub const MIN_ORDER: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectionError {
    #[error("dimension {0} is below the supported minimum of 3")]
    DimensionTooSmall(usize),
    #[error("order {0} is below the supported minimum of 2")]
    OrderTooSmall(u32),
    #[error("expected {expected} Christoffel symbols, got {got}")]
    SymbolCount { expected: usize, got: usize },
    #[error("Christoffel symbol {indices:?} has shape ({nvars} vars, order {order}), expected ({m}, {expected_order})")]
    SymbolShape {
        indices: [usize; 3],
        nvars: usize,
        order: u32,
        m: usize,
        expected_order: u32,
    },
    #[error("connection has torsion: Γ[{i}][{j}][{k}] ≠ Γ[{j}][{i}][{k}]")]
    Torsion { i: usize, j: usize, k: usize },
    #[error("shape mismatch: ({0}, order {1}) vs ({2}, order {3})")]
    ShapeMismatch(usize, u32, usize, u32),
}

/// Torsion-free connection: `Γ[i][j][k] = Γ[j][i][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    m: usize,
    order: u32,
    gamma: Vec<Jet>,
}

impl Connection {
    /// `gamma` is indexed `(i * m + j) * m + k`.
    pub fn from_symbols(m: usize, order: u32, gamma: Vec<Jet>) -> Result<Self, ConnectionError> {
        if m < MIN_DIMENSION {
            return Err(ConnectionError::DimensionTooSmall(m));
        }
        if order < MIN_ORDER {
            return Err(ConnectionError::OrderTooSmall(order));
        }
        if gamma.len() != m * m * m {
            return Err(ConnectionError::SymbolCount {
                expected: m * m * m,
                got: gamma.len(),
            });
        }
        for (n, g) in gamma.iter().enumerate() {
            if g.nvars() != m || g.order() != order {
                return Err(ConnectionError::SymbolShape {
                    indices: [n / (m * m), (n / m) % m, n % m],
                    nvars: g.nvars(),
                    order: g.order(),
                    m,
                    expected_order: order,
                });
            }
        }
        let conn = Connection { m, order, gamma };
        for i in 0..m {
            for j in (i + 1)..m {
                for k in 0..m {
                    if conn.gamma(i, j, k) != conn.gamma(j, i, k) {
                        return Err(ConnectionError::Torsion { i, j, k });
                    }
                }
            }
        }
        Ok(conn)
    }

    pub fn from_fn(
        m: usize,
        order: u32,
        mut f: impl FnMut(usize, usize, usize) -> Jet,
    ) -> Result<Self, ConnectionError> {
        let mut gamma = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    gamma.push(f(i, j, k));
                }
            }
        }
        Connection::from_symbols(m, order, gamma)
    }

    pub fn flat(m: usize, order: u32) -> Result<Self, ConnectionError> {
        Connection::from_fn(m, order, |_, _, _| Jet::zero(m, order))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.gamma[(i * self.m + j) * self.m + k]
    }

    pub fn is_flat_symbol(&self) -> bool {
        self.gamma.iter().all(Jet::is_zero)
    }

    /// Christoffel symbols with every entry truncated to `order`.
    pub(crate) fn truncated(&self, order: u32) -> Vec<Jet> {
        self.gamma.iter().map(|g| g.truncate(order)).collect()
    }

    /// Sum of Christoffel symbols; torsion-freeness is preserved.
    pub fn plus(&self, other: &Connection) -> Result<Connection, ConnectionError> {
        if self.m != other.m || self.order != other.order {
            return Err(ConnectionError::ShapeMismatch(
                self.m, self.order, other.m, other.order,
            ));
        }
        Ok(Connection {
            m: self.m,
            order: self.order,
            gamma: self.gamma.iter().zip(&other.gamma).map(|(a, b)| a + b).collect(),
        })
    }

    /// `Σ_j Γ[i][j][j]`, zero for all `i` when the symbol is trace free.
    pub fn is_trace_free(&self) -> bool {
        trace_one_form(self).entries().iter().all(Jet::is_zero)
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.gamma.iter().filter_map(Jet::lowest_degree).min()
    }
}

/// `Γ' = Γ + θ_i δ_j^k + θ_j δ_i^k`, i.e. `∇'_x y = ∇_x y + θ(x)y + θ(y)x`.
pub fn projective_perturb(nabla: &Connection, theta: &OneFormField) -> Result<Connection, ConnectionError> {
    let m = nabla.dim();
    if theta.dim() != m || theta.entries().iter().any(|t| t.nvars() != m || t.order() != nabla.order()) {
        return Err(ConnectionError::ShapeMismatch(
            m,
            nabla.order(),
            theta.dim(),
            theta.entries().first().map_or(0, Jet::order),
        ));
    }
    Connection::from_fn(m, nabla.order(), |i, j, k| {
        let mut g = nabla.gamma(i, j, k).clone();
        if j == k {
            g = &g + &theta.entries()[i];
        }
        if i == k {
            g = &g + &theta.entries()[j];
        }
        g
    })
}

/// `θ = θ_i dx^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormField {
    entries: Vec<Jet>,
}

impl OneFormField {
    pub fn new(entries: Vec<Jet>) -> Self {
        OneFormField { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Jet] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Jet::is_zero)
    }
}

/// Antisymmetric `ω[i][j]` with jet entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormField(Tensor2<Jet>);

impl TwoFormField {
    /// Rejects non-antisymmetric input, returning the offending pair.
    pub fn from_tensor(t: Tensor2<Jet>) -> Result<Self, (usize, usize)> {
        let m = t.dim();
        for i in 0..m {
            for j in i..m {
                if t.get(i, j) != &-t.get(j, i) {
                    return Err((i, j));
                }
            }
        }
        Ok(TwoFormField(t))
    }

    pub fn tensor(&self) -> &Tensor2<Jet> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        self.0.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn valid_order(&self) -> u32 {
        self.0.get(0, 0).order()
    }

    pub fn first_nonzero(&self) -> Option<JetWitness> {
        tensor2_first_nonzero(&self.0)
    }
}

/// Bilinear form with jet entries (e.g. a Ricci field).
pub type BilinearField = Tensor2<Jet>;

pub fn tensor2_first_nonzero(t: &Tensor2<Jet>) -> Option<JetWitness> {
    witness::first_nonzero(t.entries().map(|((i, j), v)| (vec![i, j], v)))
}

pub fn tensor4_first_nonzero(t: &Tensor4<Jet>) -> Option<JetWitness> {
    witness::first_nonzero(t.entries().map(|(idx, v)| (idx.to_vec(), v)))
}

/// Curvature of a jet connection, truncated at its valid order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    valid_order: u32,
    tensor: Tensor4<Jet>,
}

impl CurvatureField {
    pub(crate) fn new(tensor: Tensor4<Jet>) -> Self {
        let valid_order = tensor.get(0, 0, 0, 0).order();
        CurvatureField { valid_order, tensor }
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn valid_order(&self) -> u32 {
        self.valid_order
    }

    pub fn tensor(&self) -> &Tensor4<Jet> {
        &self.tensor
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Jet {
        self.tensor.get(i, j, k, l)
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    pub fn first_nonzero(&self) -> Option<JetWitness> {
        tensor4_first_nonzero(&self.tensor)
    }

    /// `R_P` as an algebraic curvature operator.
    pub fn eval(&self, p: &JetPoint) -> Result<CurvatureOp, AlgebraError> {
        let m = self.dim();
        if p.dim() != m {
            return Err(AlgebraError::ShapeMismatch {
                m,
                expected: m,
                got: p.dim(),
            });
        }
        let t = self.tensor.map(|j| j.eval(p).expect("dimension checked"));
        CurvatureOp::try_from_tensor(t)
    }

    pub fn at_origin(&self) -> CurvatureOp {
        let t = self.tensor.map(Jet::constant_term);
        CurvatureOp::try_from_tensor(t).expect("curvature identities hold coefficientwise")
    }

    /// First coefficient violating antisymmetry or the first Bianchi
    /// identity through the valid order.
    pub fn symmetry_violation(&self) -> Option<(crate::algebra::Identity, JetWitness)> {
        use crate::algebra::Identity;
        let wrap = |identity, (idx, jet): ([usize; 4], Jet)| {
            let (exps, value) = jet.first_nonzero().expect("nonzero residual");
            (
                identity,
                JetWitness {
                    indices: idx.to_vec(),
                    exponents: exps.to_vec(),
                    value,
                },
            )
        };
        if let Some(v) = self.tensor.antisymmetry_violation() {
            return Some(wrap(Identity::Antisymmetry, v));
        }
        self.tensor
            .bianchi_violation()
            .map(|v| wrap(Identity::FirstBianchi, v))
    }

    /// `ρ[j][k] = Σ_i R[i][j][k][i]`.
    pub fn ricci_field(&self) -> BilinearField {
        self.tensor.ricci()
    }

    /// `Tr[i][j] = Σ_k R[i][j][k][k]`.
    pub fn trace_two_form(&self) -> TwoFormField {
        TwoFormField::from_tensor(self.tensor.endomorphism_trace())
            .expect("trace of an antisymmetric pair is antisymmetric")
    }

    /// `Tr{R(x,y)} − ρ(y,x) + ρ(x,y)`; vanishes by the first Bianchi
    /// identity.
    pub fn trace_identity_residual(&self) -> Tensor2<Jet> {
        let rho = self.ricci_field();
        self.tensor
            .endomorphism_trace()
            .minus(&rho.transpose())
            .plus(&rho)
    }

    /// Pointwise Weyl projection, coefficient by coefficient.
    pub fn weyl_project_field(&self) -> CurvatureField {
        CurvatureField {
            valid_order: self.valid_order,
            tensor: tensor::weyl_project(&self.tensor),
        }
    }

    /// `ρ_s(R) − ρ_s(A)` and `ρ_a(R) − ρ_a(A)` for a constant operator `A`.
    pub fn ricci_deviation(&self, a: &CurvatureOp) -> (BilinearField, BilinearField) {
        let (rs, ra) = self.ricci_field().split();
        let (as_, aa) = crate::algebra::ricci(a).split();
        let lift = |c: &Rational| Jet::constant(self.dim(), self.valid_order, c.clone());
        (rs.minus(&as_.map(lift)), ra.minus(&aa.map(lift)))
    }
}

/// `H(Θ)` applied to a bilinear field.
pub fn h_map_field(theta: &BilinearField) -> Tensor4<Jet> {
    tensor::h_map(theta)
}

/// Lifts a constant bilinear form to degree-0 jets.
pub fn constant_bilinear(theta: &Tensor2<Rational>, order: u32) -> BilinearField {
    let m = theta.dim();
    theta.map(|c| Jet::constant(m, order, c.clone()))
}
