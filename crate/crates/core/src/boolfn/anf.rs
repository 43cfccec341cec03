use super::function::BooleanFunction;
use crate::error::Result;

/// Möbius transform: the table of algebraic normal form coefficients.
///
/// Bit `m` of the result is the coefficient of the monomial `Π_{i ∈ m} x_i`.
/// The transform is an involution.
pub fn anf_coefficients(f: &BooleanFunction) -> BooleanFunction {
    let n = f.n();
    let mut t: Vec<bool> = (0..f.size() as u64).map(|x| f.get(x)).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..t.len() {
            if x & bit != 0 {
                t[x] ^= t[x ^ bit];
            }
        }
    }
    BooleanFunction::from_fn(n, |x| t[x as usize]).expect("same dimension as the input")
}

/// Monomials (as variable masks) with coefficient 1, in increasing mask order.
pub fn anf_monomials(f: &BooleanFunction) -> Vec<u64> {
    anf_coefficients(f).support()
}

/// Algebraic degree; the zero function has degree 0 by convention here.
pub fn algebraic_degree(f: &BooleanFunction) -> u32 {
    anf_monomials(f).iter().map(|m| m.count_ones()).max().unwrap_or(0)
}

/// Evaluates a sum of monomials given as variable masks.
pub fn from_monomials(n: usize, monomials: &[u64]) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |x| monomials.iter().filter(|m| *m & x == **m).count() % 2 == 1)
}
