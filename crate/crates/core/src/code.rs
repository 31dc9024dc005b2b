//! Linear codes over `F_q`.
//!
//! A code is stored by an `m x n` generator matrix whose **columns** span the
//! code, together with a parity-check matrix `H` with `H G = 0` and
//! `rank(H) = m - n`. The zero code (`n = 0`) is a valid value.

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: FiniteField,
    m: usize,
    n: usize,
    /// `m x n`, columns are a basis of the code.
    generator: Matrix,
    /// `(m - n) x m`.
    parity: Matrix,
}

impl PartialEq for LinearCode {
    /// Equality of codeword sets.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.m == other.m
            && self.n == other.n
            && self.generator_columns().iter().all(|c| other.contains(c))
    }
}

impl LinearCode {
    /// Code spanned by the columns of an `m x n` matrix with full column rank.
    pub fn from_generator(field: &FiniteField, m: usize, generator: Matrix) -> Result<Self> {
        if generator.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} rows, expected {m}",
                generator.len()
            )));
        }
        let n = generator.first().map_or(0, Vec::len);
        if generator.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged generator matrix".into()));
        }
        check_entries(field, &generator)?;
        let gt = linalg::transpose(&generator, n);
        if linalg::rank(field, &gt, m) != n {
            return Err(Error::RankDeficient(format!(
                "generator columns are dependent (n = {n})"
            )));
        }
        let parity = linalg::nullspace(field, &gt, m);
        Ok(LinearCode {
            field: field.clone(),
            m,
            n,
            generator,
            parity,
        })
    }

    /// Code spanned by arbitrary vectors; dependent ones are dropped.
    pub fn from_spanning_vectors(field: &FiniteField, m: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        let mut rows: Matrix = vectors.to_vec();
        check_entries(field, &rows)?;
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("spanning vector of wrong length".into()));
        }
        linalg::rref(field, &mut rows, m);
        let n = rows.len();
        let generator = linalg::transpose(&rows, m);
        let generator = if n == 0 { vec![Vec::new(); m] } else { generator };
        let parity = linalg::nullspace(field, &rows, m);
        Ok(LinearCode {
            field: field.clone(),
            m,
            n,
            generator,
            parity,
        })
    }

    /// Kernel of a full-row-rank parity-check matrix.
    pub fn from_parity_check(field: &FiniteField, m: usize, parity: Matrix) -> Result<Self> {
        check_entries(field, &parity)?;
        if parity.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("parity-check row of wrong length".into()));
        }
        if linalg::rank(field, &parity, m) != parity.len() {
            return Err(Error::RankDeficient("parity-check rows are dependent".into()));
        }
        let basis = linalg::nullspace(field, &parity, m);
        let n = basis.len();
        let generator = if n == 0 {
            vec![Vec::new(); m]
        } else {
            linalg::transpose(&basis, m)
        };
        Ok(LinearCode {
            field: field.clone(),
            m,
            n,
            generator,
            parity,
        })
    }

    pub fn zero(field: &FiniteField, m: usize) -> Self {
        LinearCode {
            field: field.clone(),
            m,
            n: 0,
            generator: vec![Vec::new(); m],
            parity: linalg::identity(m),
        }
    }

    pub fn full_space(field: &FiniteField, m: usize) -> Self {
        LinearCode {
            field: field.clone(),
            m,
            n: m,
            generator: linalg::identity(m),
            parity: Vec::new(),
        }
    }

    /// Repetition code of length `m`.
    pub fn repetition(field: &FiniteField, m: usize) -> Self {
        LinearCode::from_generator(field, m, vec![vec![1]; m]).expect("all-ones column")
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn codimension(&self) -> usize {
        self.m - self.n
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity
    }

    pub fn generator_columns(&self) -> Vec<Vec<Elem>> {
        (0..self.n)
            .map(|j| self.generator.iter().map(|r| r[j]).collect())
            .collect()
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(&self.field, &self.generator, message)
    }

    pub fn syndrome(&self, v: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(&self.field, &self.parity, v)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.m && self.syndrome(v).iter().all(|&s| s == 0)
    }

    /// Message `x` with `G x = v`, if `v` is a codeword.
    pub fn message_of(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        if self.n == 0 {
            return v.iter().all(|&x| x == 0).then(Vec::new);
        }
        linalg::solve(&self.field, &self.generator, self.n, v)
    }

    /// `C(self) ∩ C(other)`, computed as the kernel of the stacked parity
    /// checks.
    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        if other.m != self.m {
            return Err(Error::DimensionMismatch(format!(
                "block lengths {} and {}",
                self.m, other.m
            )));
        }
        let mut stacked = self.parity.clone();
        stacked.extend(other.parity.iter().cloned());
        let basis = linalg::nullspace(&self.field, &stacked, self.m);
        LinearCode::from_spanning_vectors(&self.field, self.m, &basis)
    }

    /// The code generated by the Kronecker product `G1 ⊗ G2`.
    pub fn tensor(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let f = &self.field;
        let (m2, n2) = (other.m, other.n);
        let mut g = linalg::zeros(self.m * m2, self.n * n2);
        for i1 in 0..self.m {
            for j1 in 0..self.n {
                let a = self.generator[i1][j1];
                if a == 0 {
                    continue;
                }
                for i2 in 0..m2 {
                    for j2 in 0..n2 {
                        g[i1 * m2 + i2][j1 * n2 + j2] = f.mul(a, other.generator[i2][j2]);
                    }
                }
            }
        }
        if self.n * n2 == 0 {
            return Ok(LinearCode::zero(f, self.m * m2));
        }
        LinearCode::from_generator(f, self.m * m2, g)
    }

    /// Whether every cyclic shift of a codeword is a codeword.
    pub fn is_cyclic(&self) -> bool {
        self.generator_columns().iter().all(|c| {
            let mut shifted = c.clone();
            shifted.rotate_right(1);
            self.contains(&shifted)
        })
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

fn check_entries(field: &FiniteField, m: &Matrix) -> Result<()> {
    if m.iter().flatten().any(|&v| v >= field.order()) {
        return Err(Error::InvalidParameter(format!(
            "matrix entry outside F_{}",
            field.order()
        )));
    }
    Ok(())
}

/// Parity-check matrix of `code`.
pub fn generator_to_parity(code: &LinearCode) -> Matrix {
    code.parity_check().clone()
}

pub fn parity_to_generator(field: &FiniteField, m: usize, parity: Matrix) -> Result<LinearCode> {
    LinearCode::from_parity_check(field, m, parity)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn hamming74() -> LinearCode {
        let f = FiniteField::new(2, 1).unwrap();
        // systematic [7,4] Hamming code, columns are the basis
        let g = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 0, 1],
            vec![1, 0, 1, 1],
            vec![0, 1, 1, 1],
        ];
        LinearCode::from_generator(&f, 7, g).unwrap()
    }

    pub fn random_code(f: &FiniteField, m: usize, n: usize, rng: &mut impl Rng) -> LinearCode {
        loop {
            let g: Matrix = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
                .collect();
            if let Ok(c) = LinearCode::from_generator(f, m, g) {
                return c;
            }
        }
    }

    fn all_vectors(f: &FiniteField, m: usize) -> Vec<Vec<Elem>> {
        let q = f.order();
        (0..q.pow(m as u32))
            .map(|mut i| {
                (0..m)
                    .map(|_| {
                        let d = i % q;
                        i /= q;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_generator_has_empty_parity_check() {
        let f = FiniteField::new(3, 1).unwrap();
        let c = LinearCode::from_generator(&f, 3, linalg::identity(3)).unwrap();
        assert!(generator_to_parity(&c).is_empty());
    }

    #[test]
    fn hamming_parity_check() {
        let c = hamming74();
        let h = generator_to_parity(&c);
        assert_eq!(h.len(), 3);
        let hg = linalg::mat_mul(c.field(), &h, c.generator(), 4);
        assert!(hg.iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn repetition_parity_check() {
        let f = FiniteField::new(2, 1).unwrap();
        let c = LinearCode::repetition(&f, 3);
        let h = generator_to_parity(&c);
        // row space must equal that of [[1,1,0],[1,0,1]]
        let mut expected = vec![vec![1, 1, 0], vec![1, 0, 1]];
        let mut got = h.clone();
        linalg::rref(&f, &mut expected, 3);
        linalg::rref(&f, &mut got, 3);
        assert_eq!(got, expected);
    }

    #[test]
    fn rank_deficient_inputs_are_rejected() {
        let f = FiniteField::new(2, 1).unwrap();
        let g = vec![vec![1, 1], vec![1, 1], vec![0, 0]];
        assert!(matches!(
            LinearCode::from_generator(&f, 3, g),
            Err(Error::RankDeficient(_))
        ));
        let h = vec![vec![1, 0, 1], vec![1, 0, 1]];
        assert!(matches!(
            parity_to_generator(&f, 3, h),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn duality_round_trip_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = FiniteField::new(p, e).unwrap();
            for _ in 0..5 {
                let c = random_code(&f, 8, 3, &mut rng);
                let back = parity_to_generator(&f, 8, generator_to_parity(&c)).unwrap();
                for _ in 0..1000 {
                    let v: Vec<Elem> = if rng.gen_bool(0.5) {
                        let x: Vec<Elem> = (0..3).map(|_| rng.gen_range(0..f.order())).collect();
                        c.encode(&x)
                    } else {
                        (0..8).map(|_| rng.gen_range(0..f.order())).collect()
                    };
                    assert_eq!(c.contains(&v), back.contains(&v));
                }
            }
        }
    }

    #[test]
    fn intersection_is_exact_on_small_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FiniteField::new(3, 1).unwrap();
        for _ in 0..10 {
            let a = random_code(&f, 5, 3, &mut rng);
            let b = random_code(&f, 5, 3, &mut rng);
            let i = a.intersect(&b).unwrap();
            for v in all_vectors(&f, 5) {
                assert_eq!(i.contains(&v), a.contains(&v) && b.contains(&v));
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let c = hamming74();
        let f = c.field().clone();
        assert_eq!(c.intersect(&c).unwrap(), c);
        assert_eq!(c.intersect(&LinearCode::full_space(&f, 7)).unwrap(), c);
        let even = LinearCode::from_parity_check(&f, 7, vec![vec![1; 7]]).unwrap();
        let both = c.intersect(&even).unwrap();
        for v in all_vectors(&f, 7) {
            assert_eq!(both.contains(&v), c.contains(&v) && even.contains(&v));
        }
        assert_eq!(both.dimension(), 3);
        // disjoint codes collapse to an explicit zero code
        let a = LinearCode::from_generator(&f, 2, vec![vec![1], vec![0]]).unwrap();
        let b = LinearCode::from_generator(&f, 2, vec![vec![0], vec![1]]).unwrap();
        let z = a.intersect(&b).unwrap();
        assert_eq!(z.dimension(), 0);
        assert!(z.contains(&[0, 0]));
        assert!(!z.contains(&[1, 0]));
    }

    #[test]
    fn intersect_rejects_mismatches() {
        let c = hamming74();
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(matches!(
            c.intersect(&LinearCode::full_space(&f3, 7)),
            Err(Error::FieldMismatch(_))
        ));
        assert!(c.intersect(&LinearCode::full_space(c.field(), 6)).is_err());
    }

    #[test]
    fn tensor_shape() {
        let c = hamming74();
        let t = c.tensor(&c).unwrap();
        assert_eq!((t.len(), t.dimension()), (49, 16));
        let f5 = FiniteField::new(5, 1).unwrap();
        assert!(c.tensor(&LinearCode::full_space(&f5, 1)).is_err());
    }

    #[test]
    fn cyclicity() {
        let f = FiniteField::new(2, 1).unwrap();
        assert!(LinearCode::repetition(&f, 5).is_cyclic());
        let not_cyclic = LinearCode::from_generator(&f, 3, vec![vec![1], vec![0], vec![0]]).unwrap();
        assert!(!not_cyclic.is_cyclic());
    }
}
