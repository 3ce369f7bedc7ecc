//! Seeded generators for curvature operators, bilinear forms, jets and
//! connections. All draws use small integer coefficients so exact
//! arithmetic stays cheap, and every generator is deterministic in its seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    bianchi_project, decompose, AlgebraError, BilinearForm, CurvatureOp, DecompositionTriple,
    MIN_DIMENSION,
};
use crate::connection::{Connection, OneFormField};
use crate::jet::Jet;
use crate::rational::{self, Rational};
use crate::tensor::{Tensor2, Tensor4};

pub type SeededRng = ChaCha8Rng;

const MAX_DRAWS: usize = 16;
const COEFF_RANGE: i64 = 3;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut SeededRng) -> Rational {
    rational::int(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE))
}

/// Which irreducible components a generated operator carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentMask {
    pub weyl: bool,
    pub sym: bool,
    pub alt: bool,
}

impl ComponentMask {
    pub const ALL: ComponentMask = ComponentMask::new(true, true, true);
    pub const NONE: ComponentMask = ComponentMask::new(false, false, false);

    pub const fn new(weyl: bool, sym: bool, alt: bool) -> Self {
        ComponentMask { weyl, sym, alt }
    }

    /// The eight masks in the row order of the realization table.
    pub fn table_order() -> [ComponentMask; 8] {
        [
            ComponentMask::new(true, true, true),
            ComponentMask::new(true, true, false),
            ComponentMask::new(true, false, true),
            ComponentMask::new(true, false, false),
            ComponentMask::new(false, true, true),
            ComponentMask::new(false, true, false),
            ComponentMask::new(false, false, true),
            ComponentMask::new(false, false, false),
        ]
    }

    pub fn is_empty(&self) -> bool {
        !(self.weyl || self.sym || self.alt)
    }

    /// Table notation, e.g. `(*,*,0)`.
    pub fn stars(&self) -> String {
        let s = |b: bool| if b { "*" } else { "0" };
        format!("({},{},{})", s(self.weyl), s(self.sym), s(self.alt))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad mask {0:?}: expected `none`, `all`, or a comma list of weyl,sym,alt")]
pub struct MaskParseError(pub String);

impl FromStr for ComponentMask {
    type Err = MaskParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "none" | "" => return Ok(ComponentMask::NONE),
            "all" => return Ok(ComponentMask::ALL),
            _ => {}
        }
        let mut mask = ComponentMask::NONE;
        for part in s.split(',') {
            let flag = match part.trim() {
                "weyl" => &mut mask.weyl,
                "sym" => &mut mask.sym,
                "alt" => &mut mask.alt,
                _ => return Err(MaskParseError(s.to_string())),
            };
            if *flag {
                return Err(MaskParseError(s.to_string()));
            }
            *flag = true;
        }
        Ok(mask)
    }
}

impl fmt::Display for ComponentMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.weyl, "weyl"), (self.sym, "sym"), (self.alt, "alt")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

pub fn random_bilinear(rng: &mut SeededRng, m: usize) -> BilinearForm {
    Tensor2::from_fn(m, |_, _| small(rng))
}

pub fn random_symmetric(rng: &mut SeededRng, m: usize) -> BilinearForm {
    random_bilinear(rng, m).split().0.scaled(&rational::int(2))
}

pub fn random_antisymmetric(rng: &mut SeededRng, m: usize) -> BilinearForm {
    random_bilinear(rng, m).split().1.scaled(&rational::int(2))
}

/// Antisymmetric in the first pair, otherwise unconstrained.
fn random_antisymmetric_raw(rng: &mut SeededRng, m: usize) -> Tensor4<Rational> {
    let mut t = Tensor4::from_fn(m, |_, _, _, _| rational::zero());
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                for l in 0..m {
                    let v = small(rng);
                    t.set(j, i, k, l, -v.clone());
                    t.set(i, j, k, l, v);
                }
            }
        }
    }
    t
}

/// Deterministic operator whose nonzero components are exactly those in
/// `mask`. Draws that leave a requested component at zero are redrawn from
/// the same stream, up to a fixed bound.
pub fn random_curvature(
    seed: u64,
    m: usize,
    mask: ComponentMask,
) -> Result<CurvatureOp, AlgebraError> {
    if m < MIN_DIMENSION {
        return Err(AlgebraError::DimensionTooSmall(m));
    }
    if mask.is_empty() {
        return CurvatureOp::zero(m);
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_DRAWS {
        let full = bianchi_project(&random_antisymmetric_raw(&mut rng, m))?;
        let parts = decompose(&full);
        let honest = (!mask.weyl || !parts.weyl.is_zero())
            && (!mask.sym || !parts.ricci_sym.is_zero())
            && (!mask.alt || !parts.ricci_alt.is_zero());
        if !honest {
            continue;
        }
        let zero_form = crate::algebra::bilinear_zero(m);
        let kept = DecompositionTriple {
            weyl: if mask.weyl { parts.weyl } else { CurvatureOp::zero(m)? },
            ricci_sym: if mask.sym { parts.ricci_sym } else { zero_form.clone() },
            ricci_alt: if mask.alt { parts.ricci_alt } else { zero_form },
        };
        return Ok(kept.recompose());
    }
    Err(AlgebraError::DegenerateDraw(MAX_DRAWS))
}

/// Sparse jet with up to `terms` monomials of degree at most `max_degree`.
pub fn random_jet(rng: &mut SeededRng, m: usize, order: u32, max_degree: u32, terms: usize) -> Jet {
    let mut jet = Jet::zero(m, order);
    let max_degree = max_degree.min(order);
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u16; m];
        for _ in 0..degree {
            exps[rng.gen_range(0..m)] += 1;
        }
        jet = &jet + &Jet::monomial(m, order, &exps, small(rng));
    }
    jet
}

/// Torsion-free connection with sparse polynomial Christoffel symbols of
/// degree at most 2.
pub fn random_connection(rng: &mut SeededRng, m: usize, order: u32) -> Connection {
    let mut gamma = vec![Jet::zero(m, order); m * m * m];
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                let entry = random_jet(rng, m, order, 2, 2);
                gamma[(j * m + i) * m + k] = entry.clone();
                gamma[(i * m + j) * m + k] = entry;
            }
        }
    }
    Connection::from_symbols(m, order, gamma).expect("symmetric by construction")
}

pub fn random_one_form(rng: &mut SeededRng, m: usize, order: u32) -> OneFormField {
    OneFormField::new((0..m).map(|_| random_jet(rng, m, order, 2, 3)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ricci, weyl_project};

    #[test]
    fn mask_parsing() {
        assert_eq!("none".parse::<ComponentMask>().unwrap(), ComponentMask::NONE);
        assert_eq!(
            "weyl,sym".parse::<ComponentMask>().unwrap(),
            ComponentMask::new(true, true, false)
        );
        assert!("weyl,weyl".parse::<ComponentMask>().is_err());
        assert!("ricci".parse::<ComponentMask>().is_err());
        assert_eq!(ComponentMask::new(false, true, true).to_string(), "sym,alt");
        assert_eq!(ComponentMask::new(true, false, true).stars(), "(*,0,*)");
    }

    #[test]
    fn empty_mask_is_zero() {
        assert!(random_curvature(3, 3, ComponentMask::NONE).unwrap().is_zero());
    }

    #[test]
    fn masks_are_honest() {
        for (n, mask) in ComponentMask::table_order().into_iter().enumerate() {
            let a = random_curvature(n as u64, 3, mask).unwrap();
            let d = decompose(&a);
            assert_eq!(!d.weyl.is_zero(), mask.weyl, "{mask}");
            assert_eq!(!d.ricci_sym.is_zero(), mask.sym, "{mask}");
            assert_eq!(!d.ricci_alt.is_zero(), mask.alt, "{mask}");
        }
        let alt_only = random_curvature(9, 3, ComponentMask::new(false, false, true)).unwrap();
        assert!(weyl_project(&alt_only).is_zero());
        assert!(ricci(&alt_only).split().0.is_zero());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_curvature(42, 4, ComponentMask::ALL).unwrap();
        let b = random_curvature(42, 4, ComponentMask::ALL).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_curvature(43, 4, ComponentMask::ALL).unwrap());
    }
}
