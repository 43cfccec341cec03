use super::matrix::{reduce_against, rref_rows, span_elements, F2Matrix};
use super::vector::{low_mask, F2Vector};
use super::MAX_AMBIENT_DIM;
use crate::error::{check_dim, Error, Result};

pub(crate) fn check_ambient(n: usize) -> Result<()> {
    if n > MAX_AMBIENT_DIM {
        return Err(Error::TooLarge { dim: n, max: MAX_AMBIENT_DIM });
    }
    Ok(())
}

/// A linear subspace of F2^n in canonical form.
///
/// The basis is kept in reduced row-echelon form (pivot = lowest set
/// coordinate, sorted by pivot), so two subspaces are equal exactly when their
/// stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<u64>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// Span of packed vectors of F2^n.
    pub fn from_bits(n: usize, vectors: &[u64]) -> Result<Self> {
        check_ambient(n)?;
        if vectors.iter().any(|v| v & !low_mask(n) != 0) {
            return Err(Error::InvalidArgument(format!("vector outside F2^{n}")));
        }
        Ok(Subspace { ambient: n, basis: rref_rows(vectors, n) })
    }

    /// The span of a nonempty list of equal-length vectors.
    pub fn span(vectors: &[F2Vector]) -> Result<Self> {
        let n = vectors
            .first()
            .map(|v| v.dim())
            .ok_or_else(|| Error::InvalidArgument("span of an empty list has no ambient dimension".into()))?;
        Self::span_in(n, vectors)
    }

    /// The span of `vectors` inside F2^n (the list may be empty).
    pub fn span_in(n: usize, vectors: &[F2Vector]) -> Result<Self> {
        for v in vectors {
            check_dim(n, v.dim())?;
        }
        let bits: Vec<u64> = vectors.iter().map(|v| v.bits()).collect();
        Self::from_bits(n, &bits)
    }

    /// The subspace `{x : x_i = 0 for i < codim}` of codimension `codim`.
    pub fn standard(n: usize, codim: usize) -> Result<Self> {
        if codim > n {
            return Err(Error::InvalidArgument(format!("codimension {codim} exceeds {n}")));
        }
        Ok(Subspace { ambient: n, basis: (codim..n).map(|i| 1u64 << i).collect() })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    #[inline]
    pub fn basis_bits(&self) -> &[u64] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<F2Vector> {
        self.basis.iter().map(|b| F2Vector::truncated(self.ambient, *b)).collect()
    }

    pub fn as_matrix(&self) -> F2Matrix {
        F2Matrix::new(self.ambient, self.basis.clone()).expect("basis fits ambient space")
    }

    pub fn pivot_mask(&self) -> u64 {
        self.basis.iter().fold(0, |m, b| m | (1u64 << b.trailing_zeros()))
    }

    #[inline]
    pub fn contains_bits(&self, v: u64) -> bool {
        reduce_against(&self.basis, v) == 0
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        v.dim() == self.ambient && self.contains_bits(v.bits())
    }

    /// Lexicographically minimal element of `v + self`.
    #[inline]
    pub fn reduce_bits(&self, v: u64) -> u64 {
        reduce_against(&self.basis, v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains_bits(*b))
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates_of(&self, v: u64) -> Option<u64> {
        if !self.contains_bits(v) {
            return None;
        }
        Some(
            self.basis
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, b)| acc | (((v >> b.trailing_zeros()) & 1) << i)),
        )
    }

    /// The element with coefficient vector `coeffs` in the canonical basis.
    #[inline]
    pub fn combine(&self, coeffs: u64) -> u64 {
        let mut acc = 0u64;
        let mut c = coeffs;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            acc ^= self.basis[i];
            c &= c - 1;
        }
        acc
    }

    /// Elements indexed by their coefficient vector: `out[y] = Σ y_i b_i`.
    pub fn elements_by_coefficients(&self) -> Result<Vec<u64>> {
        check_ambient(self.dim())?;
        Ok(span_elements(&self.basis))
    }

    /// All `2^dim` elements, starting at zero, in Gray-code order over basis coefficients.
    pub fn enumerate(&self) -> Result<Vec<F2Vector>> {
        check_ambient(self.dim())?;
        let size = 1usize << self.dim();
        let mut out = Vec::with_capacity(size);
        let mut cur = 0u64;
        out.push(F2Vector::truncated(self.ambient, 0));
        for t in 1..size {
            cur ^= self.basis[t.trailing_zeros() as usize];
            out.push(F2Vector::truncated(self.ambient, cur));
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient, other.ambient)?;
        // kernel of [A; B]^T-style combination: x = Σ a_i u_i = Σ b_j w_j
        let a = self.dim();
        let vectors: Vec<u64> = self.basis.iter().chain(other.basis.iter()).copied().collect();
        // relations among the stacked vectors
        let cols = vectors.len();
        if cols == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = F2Matrix::new(cols, (0..self.ambient)
            .map(|bit| {
                vectors
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, v)| acc | (((v >> bit) & 1) << i))
            })
            .collect())?;
        let kernel = stacked.kernel_basis();
        let mut out = Vec::new();
        for t in 0..kernel.ncols() {
            let rel = kernel.column(t);
            let x = (0..a).filter(|i| (rel >> i) & 1 == 1).fold(0u64, |acc, i| acc ^ vectors[i]);
            out.push(x);
        }
        Subspace::from_bits(self.ambient, &out)
    }

    /// `{h ∈ self : ⟨coords(h), alpha⟩ = 0}`, where `alpha` is a character of the
    /// coefficient space F2^dim.
    pub fn character_kernel(&self, alpha: u64) -> Subspace {
        if alpha == 0 {
            return self.clone();
        }
        let pivot = alpha.trailing_zeros() as usize;
        let mut gens = Vec::with_capacity(self.dim().saturating_sub(1));
        for i in 0..self.dim() {
            if i == pivot {
                continue;
            }
            if (alpha >> i) & 1 == 1 {
                gens.push(self.basis[i] ^ self.basis[pivot]);
            } else {
                gens.push(self.basis[i]);
            }
        }
        Subspace::from_bits(self.ambient, &gens).expect("generators lie in the ambient space")
    }

    /// Unit vectors on the non-pivot coordinates; they form a basis of F2^n / self.
    pub fn complement_basis(&self) -> Vec<u64> {
        let pm = self.pivot_mask();
        (0..self.ambient).filter(|c| (pm >> c) & 1 == 0).map(|c| 1u64 << c).collect()
    }

    /// Coordinates of the coset `v + self` in the quotient basis of
    /// [`Subspace::complement_basis`], packed as an integer in `[0, 2^codim)`.
    #[inline]
    pub fn quotient_coords(&self, v: u64) -> u64 {
        let r = self.reduce_bits(v);
        pext(r, !self.pivot_mask() & low_mask(self.ambient))
    }

    /// Canonical representative of the coset with quotient coordinates `coords`.
    #[inline]
    pub fn quotient_rep(&self, coords: u64) -> u64 {
        pdep(coords, !self.pivot_mask() & low_mask(self.ambient))
    }

    /// Basis of a complement of `sub` inside `self` (representatives of self / sub).
    pub fn relative_complement(&self, sub: &Subspace) -> Result<Vec<u64>> {
        if !sub.is_subspace_of(self) {
            return Err(Error::InvalidArgument("not a subspace of the enclosing space".into()));
        }
        let mut acc = sub.basis.clone();
        let mut out = Vec::new();
        for b in &self.basis {
            let reduced = rref_rows(&acc, self.ambient);
            if reduce_against(&reduced, *b) != 0 {
                acc.push(*b);
                out.push(*b);
            }
        }
        Ok(out)
    }
}

/// Software parallel-bit-extract: gathers the bits of `x` selected by `mask`.
#[inline]
pub(crate) fn pext(x: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    while mask != 0 {
        let b = mask.trailing_zeros();
        out |= ((x >> b) & 1) << k;
        k += 1;
        mask &= mask - 1;
    }
    out
}

/// Inverse of [`pext`]: scatters the low bits of `x` to the positions of `mask`.
#[inline]
pub(crate) fn pdep(x: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    while mask != 0 {
        let b = mask.trailing_zeros();
        out |= ((x >> k) & 1) << b;
        k += 1;
        mask &= mask - 1;
    }
    out
}

/// An affine flat `shift + subspace` with the lexicographically minimal shift.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineCoset {
    shift: F2Vector,
    subspace: Subspace,
}

impl AffineCoset {
    pub fn new(shift: F2Vector, subspace: Subspace) -> Result<Self> {
        check_dim(subspace.ambient_dim(), shift.dim())?;
        let canonical = F2Vector::truncated(shift.dim(), subspace.reduce_bits(shift.bits()));
        Ok(AffineCoset { shift: canonical, subspace })
    }

    pub fn shift(&self) -> F2Vector {
        self.shift
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// A flat is strict when it does not pass through the origin.
    pub fn is_strict(&self) -> bool {
        !self.shift.is_zero()
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        v.dim() == self.shift.dim() && self.subspace.contains_bits(v.bits() ^ self.shift.bits())
    }

    pub fn points(&self) -> Result<Vec<F2Vector>> {
        Ok(self.subspace.enumerate()?.into_iter().map(|h| h + self.shift).collect())
    }
}

/// One lexicographically minimal representative per coset of `h` in F2^n.
///
/// Representatives are listed in order of their quotient coordinates, so the
/// representative of `h` itself (zero) comes first.
pub fn coset_transversal(n: usize, h: &Subspace) -> Result<Vec<F2Vector>> {
    check_dim(n, h.ambient_dim())?;
    check_ambient(n)?;
    Ok((0..1u64 << h.codim())
        .map(|c| F2Vector::truncated(n, h.quotient_rep(c)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::sample::random_subspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn span_of_standard_basis_is_full() {
        let s = Subspace::span(&[
            F2Vector::parse_bits("10").unwrap(),
            F2Vector::parse_bits("01").unwrap(),
        ])
        .unwrap();
        assert_eq!(s, Subspace::full(2));
    }

    #[test]
    fn duplicates_collapse() {
        let v = F2Vector::parse_bits("110").unwrap();
        assert_eq!(Subspace::span(&[v, v]).unwrap().dim(), 1);
        assert!(Subspace::span(&[]).is_err());
    }

    #[test]
    fn span_membership_matches_combination_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let vs: Vec<F2Vector> = (0..5).map(|_| F2Vector::truncated(8, rng.gen())).collect();
            let s = Subspace::span(&vs).unwrap();
            let mut combos = HashSet::new();
            for mask in 0u32..32 {
                let x = (0..5).filter(|i| mask >> i & 1 == 1).fold(0u64, |a, i| a ^ vs[i].bits());
                combos.insert(x);
            }
            for p in 0u64..256 {
                assert_eq!(s.contains_bits(p), combos.contains(&p));
            }
        }
    }

    #[test]
    fn enumerate_small_cases() {
        let z = Subspace::zero(5).enumerate().unwrap();
        assert_eq!(z, vec![F2Vector::zero(5)]);
        let full = Subspace::full(3).enumerate().unwrap();
        assert_eq!(full.len(), 8);
        assert_eq!(full.iter().map(|v| v.bits()).collect::<HashSet<_>>().len(), 8);
    }

    #[test]
    fn enumerate_random_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_subspace(10, 4, &mut rng).unwrap();
        let elems = s.enumerate().unwrap();
        assert_eq!(elems.len(), 16);
        assert!(elems[0].is_zero());
        assert!(elems.iter().all(|e| s.contains(e)));
        assert_eq!(Subspace::span(&elems).unwrap(), s);
    }

    #[test]
    fn transversal_edge_cases() {
        assert_eq!(coset_transversal(3, &Subspace::full(3)).unwrap(), vec![F2Vector::zero(3)]);
        assert_eq!(coset_transversal(2, &Subspace::zero(2)).unwrap().len(), 4);
    }

    fn lex_min_of_coset(h: &Subspace, v: u64) -> u64 {
        h.enumerate()
            .unwrap()
            .iter()
            .map(|e| e.bits() ^ v)
            .min_by(|a, b| crate::f2::vector::lex_cmp_bits(*a, *b))
            .unwrap()
    }

    #[test]
    fn transversal_covers_and_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let h = random_subspace(8, 5, &mut rng).unwrap();
            let reps = coset_transversal(8, &h).unwrap();
            assert_eq!(reps.len(), 8);
            assert!(reps[0].is_zero());
            let mut covered = HashSet::new();
            for (i, r) in reps.iter().enumerate() {
                assert_eq!(lex_min_of_coset(&h, r.bits()), r.bits());
                for s in &reps[i + 1..] {
                    assert!(!h.contains_bits(r.bits() ^ s.bits()));
                }
                for e in h.enumerate().unwrap() {
                    covered.insert(e.bits() ^ r.bits());
                }
            }
            assert_eq!(covered.len(), 256);
        }
    }

    #[test]
    fn quotient_coordinates_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_subspace(9, 4, &mut rng).unwrap();
        for v in 0u64..512 {
            let c = h.quotient_coords(v);
            assert!(h.contains_bits(h.quotient_rep(c) ^ v));
        }
    }

    #[test]
    fn intersection_and_character_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let a = random_subspace(7, 5, &mut rng).unwrap();
            let b = random_subspace(7, 4, &mut rng).unwrap();
            let i = a.intersect(&b).unwrap();
            for v in 0u64..128 {
                assert_eq!(i.contains_bits(v), a.contains_bits(v) && b.contains_bits(v));
            }
            let alpha = rng.gen_range(1..32u64);
            let k = a.character_kernel(alpha);
            assert_eq!(k.dim(), 4);
            for y in 0u64..32 {
                let h = a.combine(y);
                let parity = (y & alpha).count_ones() % 2 == 0;
                assert_eq!(k.contains_bits(h), parity);
            }
        }
    }

    #[test]
    fn affine_coset_is_canonical() {
        let h = Subspace::span(&[F2Vector::parse_bits("110").unwrap()]).unwrap();
        let a = AffineCoset::new(F2Vector::parse_bits("100").unwrap(), h.clone()).unwrap();
        let b = AffineCoset::new(F2Vector::parse_bits("010").unwrap(), h).unwrap();
        assert_eq!(a, b);
        assert!(a.is_strict());
        assert_eq!(a.points().unwrap().len(), 2);
    }
}
