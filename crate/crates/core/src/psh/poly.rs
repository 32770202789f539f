//! Polynomial maps `ℂ^N → ℂ^M` (`N, M ≤ 2`) with exact Jacobians.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use super::grid::Point;
use super::PshError;

/// Exponents of `z1, z2`.
pub type Monomial = [u32; 2];

/// Reads `"1"`, `"z"`, `"z1^2*z2"` and the like.
pub fn parse_monomial(text: &str) -> Result<Monomial, PshError> {
    let bad = || PshError::Monomial(text.to_string());
    let mut exps = [0u32; 2];
    let trimmed = text.trim();
    if trimmed == "1" {
        return Ok(exps);
    }
    for factor in trimmed.split('*') {
        let factor = factor.trim();
        let (var, power) = match factor.split_once('^') {
            Some((v, p)) => (v.trim(), p.trim().parse::<u32>().map_err(|_| bad())?),
            None => (factor, 1),
        };
        let slot = match var {
            "z" | "z1" => 0,
            "z2" => 1,
            _ => return Err(bad()),
        };
        exps[slot] += power;
    }
    Ok(exps)
}

pub fn format_monomial(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { alloc::format!("z{}", i + 1) } else { alloc::format!("z{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<(Monomial, Complex64)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(Monomial, Complex64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: &[Complex64; 2]) -> Complex64 {
        self.terms.iter().map(|(m, c)| c * z[0].powu(m[0]) * z[1].powu(m[1])).sum()
    }

    /// `∂/∂z_var`, by differentiating coefficients.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] > 0)
            .map(|(m, c)| {
                let mut d = *m;
                d[var] -= 1;
                (d, c * m[var] as f64)
            })
            .collect();
        Self { terms }
    }

    fn uses(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[var] > 0)
    }
}

/// Holomorphic map given by polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    dim_in: usize,
    components: Vec<Polynomial>,
    jacobian: Vec<[Polynomial; 2]>,
    discrete_fibers: bool,
}

impl PolyMap {
    pub fn new(dim_in: usize, components: Vec<Polynomial>, discrete_fibers: bool) -> Result<Self, PshError> {
        if !(1..=2).contains(&dim_in) || !(1..=2).contains(&components.len()) {
            return Err(PshError::MapDimension { dim_in, dim_out: components.len() });
        }
        if dim_in == 1 && components.iter().any(|p| p.uses(1)) {
            return Err(PshError::MapDimension { dim_in, dim_out: components.len() });
        }
        let jacobian = components.iter().map(|p| [p.derivative(0), p.derivative(1)]).collect();
        Ok(Self { dim_in, components, jacobian, discrete_fibers })
    }

    pub fn identity(dim: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let comps = (0..dim)
            .map(|i| {
                let mut m = [0; 2];
                m[i] = 1;
                Polynomial::new(alloc::vec![(m, one)])
            })
            .collect();
        Self::new(dim, comps, true).expect("dimension 1 or 2")
    }

    /// `z ↦ z^k` in one variable.
    pub fn power(k: u32) -> Self {
        Self::new(1, alloc::vec![Polynomial::new(alloc::vec![([k, 0], Complex64::new(1.0, 0.0))])], true).expect("one variable")
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Declared, not checked.
    pub fn has_discrete_fibers(&self) -> bool {
        self.discrete_fibers
    }

    pub fn eval(&self, z: &[Complex64; 2]) -> [Complex64; 2] {
        let mut w = [Complex64::new(0.0, 0.0); 2];
        for (i, p) in self.components.iter().enumerate() {
            w[i] = p.eval(z);
        }
        w
    }

    /// `J[i][j] = ∂g_i/∂z_j`.
    pub fn jacobian(&self, z: &[Complex64; 2]) -> [[Complex64; 2]; 2] {
        let mut j = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in self.jacobian.iter().enumerate() {
            for v in 0..self.dim_in {
                j[i][v] = row[v].eval(z);
            }
        }
        j
    }

    pub fn eval_point(&self, p: &Point) -> Point {
        let w = self.eval(&to_complex(p));
        [w[0].re, w[0].im, w[1].re, w[1].im]
    }
}

pub fn to_complex(p: &Point) -> [Complex64; 2] {
    [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_parse_and_print() {
        assert_eq!(parse_monomial("1").unwrap(), [0, 0]);
        assert_eq!(parse_monomial("z").unwrap(), [1, 0]);
        assert_eq!(parse_monomial("z1^2*z2").unwrap(), [2, 1]);
        assert_eq!(parse_monomial("z2 * z2").unwrap(), [0, 2]);
        assert!(parse_monomial("w").is_err());
        assert!(parse_monomial("z^x").is_err());
        assert_eq!(format_monomial(&[2, 1]), "z1^2*z2");
        assert_eq!(format_monomial(&[0, 0]), "1");
    }

    #[test]
    fn square_map_and_its_derivative() {
        let g = PolyMap::power(2);
        let z = [Complex64::new(1.0, 2.0), Complex64::new(0.0, 0.0)];
        assert_eq!(g.eval(&z)[0], Complex64::new(-3.0, 4.0));
        assert_eq!(g.jacobian(&z)[0][0], Complex64::new(2.0, 4.0));
        assert_eq!(g.eval_point(&[0.0, 1.0, 0.0, 0.0]), [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn two_variable_jacobian_is_exact() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let g = PolyMap::new(2, alloc::vec![Polynomial::new(alloc::vec![([1, 1], one)]), Polynomial::new(alloc::vec![([0, 2], i), ([1, 0], one)])], true)
            .unwrap();
        let z = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0)];
        let j = g.jacobian(&z);
        assert_eq!(j[0], [z[1], z[0]]);
        assert_eq!(j[1], [one, i * 2.0 * z[1]]);
    }

    #[test]
    fn dimensions_are_checked() {
        let p = Polynomial::new(alloc::vec![([0, 1], Complex64::new(1.0, 0.0))]);
        assert!(PolyMap::new(1, alloc::vec![p.clone()], true).is_err());
        assert!(PolyMap::new(3, alloc::vec![p], true).is_err());
    }
}
