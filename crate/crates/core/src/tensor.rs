//! Dense index arrays shared by constant tensors (rational entries) and
//! tensor fields (jet entries), plus the index gymnastics both need: Ricci
//! trace, symmetric/alternating split, the `H` map and the Weyl projection.

use num_traits::Zero;

use crate::jet::Jet;
use crate::rational::{self, Rational};

/// Entry type of a tensor: exact scalars or jets.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Coefficient for Jet {
    fn zero_like(&self) -> Self {
        Jet::zero(self.nvars(), self.order())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

/// `T[i][j]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2<T> {
    m: usize,
    data: Vec<T>,
}

/// `T[i][j][k][l]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<T> {
    m: usize,
    data: Vec<T>,
}

impl<T: Coefficient> Tensor2<T> {
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        Tensor2 { m, data }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.m + j] = v;
    }

    pub fn map<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> Tensor2<U> {
        Tensor2 {
            m: self.m,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Self {
        assert_eq!(self.m, other.m);
        Tensor2 {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.plus(b))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.minus(b))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        self.map(|a| a.scaled(c))
    }

    pub fn transpose(&self) -> Self {
        Tensor2::from_fn(self.m, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coefficient::is_zero_coeff)
    }

    /// `(½(T + Tᵀ), ½(T − Tᵀ))`.
    pub fn split(&self) -> (Self, Self) {
        let half = rational::frac(1, 2);
        let t = self.transpose();
        (self.plus(&t).scaled(&half), self.minus(&t).scaled(&half))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let m = self.m;
        self.data.iter().enumerate().map(move |(n, v)| ((n / m, n % m), v))
    }
}

impl<T: Coefficient> Tensor4<T> {
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(m * m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Tensor4 { m, data }
    }

    pub(crate) fn from_vec(m: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), m * m * m * m);
        Tensor4 { m, data }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.m + j) * self.m + k) * self.m + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        &self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: T) {
        let n = self.idx(i, j, k, l);
        self.data[n] = v;
    }

    pub fn map<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> Tensor4<U> {
        Tensor4 {
            m: self.m,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Self {
        assert_eq!(self.m, other.m);
        Tensor4 {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.plus(b))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.minus(b))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        self.map(|a| a.scaled(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coefficient::is_zero_coeff)
    }

    pub fn entries(&self) -> impl Iterator<Item = ([usize; 4], &T)> {
        let m = self.m;
        self.data.iter().enumerate().map(move |(n, v)| {
            let l = n % m;
            let k = (n / m) % m;
            let j = (n / (m * m)) % m;
            let i = n / (m * m * m);
            ([i, j, k, l], v)
        })
    }

    /// `ρ[j][k] = Σ_i T[i][j][k][i]`.
    pub fn ricci(&self) -> Tensor2<T> {
        let m = self.m;
        Tensor2::from_fn(m, |j, k| {
            (0..m).fold(self.get(0, j, k, 0).zero_like(), |acc, i| {
                acc.plus(self.get(i, j, k, i))
            })
        })
    }

    /// `Tr[i][j] = Σ_k T[i][j][k][k]`.
    pub fn endomorphism_trace(&self) -> Tensor2<T> {
        let m = self.m;
        Tensor2::from_fn(m, |i, j| {
            (0..m).fold(self.get(i, j, 0, 0).zero_like(), |acc, k| {
                acc.plus(self.get(i, j, k, k))
            })
        })
    }

    /// `S[i][j][k][l] = T[i][j][k][l] + T[j][k][i][l] + T[k][i][j][l]`.
    pub fn cyclic_sum(&self) -> Self {
        Tensor4::from_fn(self.m, |i, j, k, l| {
            self.get(i, j, k, l)
                .plus(self.get(j, k, i, l))
                .plus(self.get(k, i, j, l))
        })
    }

    /// First index tuple where `T[i][j][k][l] ≠ −T[j][i][k][l]`.
    pub fn antisymmetry_violation(&self) -> Option<([usize; 4], T)> {
        self.entries().find_map(|([i, j, k, l], v)| {
            let r = v.plus(self.get(j, i, k, l));
            (!r.is_zero_coeff()).then_some(([i, j, k, l], r))
        })
    }

    /// First index tuple where the cyclic sum over the first three slots
    /// does not vanish.
    pub fn bianchi_violation(&self) -> Option<([usize; 4], T)> {
        let m = self.m;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let s = self
                            .get(i, j, k, l)
                            .plus(self.get(j, k, i, l))
                            .plus(self.get(k, i, j, l));
                        if !s.is_zero_coeff() {
                            return Some(([i, j, k, l], s));
                        }
                    }
                }
            }
        }
        None
    }
}

/// `H(Θ)[i][j][k][l] = (Θ[i][j] − Θ[j][i])δ_k^l + Θ[i][k]δ_j^l − Θ[j][k]δ_i^l`.
pub fn h_map<T: Coefficient>(theta: &Tensor2<T>) -> Tensor4<T> {
    let zero = theta.get(0, 0).zero_like();
    Tensor4::from_fn(theta.dim(), |i, j, k, l| {
        let mut v = zero.clone();
        if k == l {
            v = v.plus(theta.get(i, j)).minus(theta.get(j, i));
        }
        if j == l {
            v = v.plus(theta.get(i, k));
        }
        if i == l {
            v = v.minus(theta.get(j, k));
        }
        v
    })
}

/// `A + H(ρ_s)/(m−1) + H(ρ_a)/(m+1)`.
pub fn weyl_project<T: Coefficient>(a: &Tensor4<T>) -> Tensor4<T> {
    let m = a.dim() as i64;
    let (rs, ra) = a.ricci().split();
    a.plus(&h_map(&rs).scaled(&rational::frac(1, m - 1)))
        .plus(&h_map(&ra).scaled(&rational::frac(1, m + 1)))
}

/// `W − H(ρ_s)/(m−1) − H(ρ_a)/(m+1)`: inverse of the decomposition.
pub fn recompose<T: Coefficient>(weyl: &Tensor4<T>, sym: &Tensor2<T>, alt: &Tensor2<T>) -> Tensor4<T> {
    let m = weyl.dim() as i64;
    weyl.minus(&h_map(sym).scaled(&rational::frac(1, m - 1)))
        .minus(&h_map(alt).scaled(&rational::frac(1, m + 1)))
}
