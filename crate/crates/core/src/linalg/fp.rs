//! Arithmetic and linear algebra over a prime field.

/// The Mersenne prime `2^31 - 1`, default modulus for rank computations.
pub const P31: u64 = 2_147_483_647;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        Field { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let (mut base, mut e, mut r) = (a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

/// Sparse vector: strictly increasing indices, nonzero entries.
pub type SparseVec = Vec<(u32, u64)>;

/// Returns `v + c * w`.
pub fn axpy(f: &Field, v: &[(u32, u64)], c: u64, w: &[(u32, u64)]) -> SparseVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i]);
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            let x = f.mul(c, w[j].1);
            if x != 0 {
                out.push((w[j].0, x));
            }
            j += 1;
        } else {
            let x = f.add(v[i].1, f.mul(c, w[j].1));
            if x != 0 {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a sparse matrix given by its columns; rows are `< nrows`.
pub fn sparse_rank(f: &Field, nrows: usize, cols: impl IntoIterator<Item = SparseVec>) -> usize {
    lowest_pivots(f, nrows, cols).iter().flatten().count()
}

/// Left-to-right reduction by lowest entries; returns the pivot row of each
/// column. The rank of the submatrix on rows `>= i` and columns `<= j` is
/// the number of pivots in that corner.
pub fn lowest_pivots(f: &Field, nrows: usize, cols: impl IntoIterator<Item = SparseVec>) -> Vec<Option<u32>> {
    let mut pivot_of: Vec<Option<SparseVec>> = vec![None; nrows];
    let mut out = Vec::new();
    for mut v in cols {
        let mut got = None;
        while let Some(&(low, val)) = v.last() {
            match &pivot_of[low as usize] {
                Some(u) => {
                    let c = f.neg(f.mul(val, f.inv(u.last().unwrap().1)));
                    v = axpy(f, &v, c, u);
                }
                None => {
                    pivot_of[low as usize] = Some(v);
                    got = Some(low);
                    break;
                }
            }
        }
        out.push(got);
    }
    out
}

/// A subspace of `F^n` kept as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub dim_ambient: usize,
    pub basis: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            dim_ambient: n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span(f: &Field, n: usize, vectors: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut s = Subspace::zero(n);
        for v in vectors {
            s.insert(f, v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis in place; returns true if the residue is zero.
    pub fn reduce(&self, f: &Field, v: &mut [u64]) -> bool {
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    if *y != 0 {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                }
            }
        }
        v.iter().all(|x| *x == 0)
    }

    pub fn contains(&self, f: &Field, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w)
    }

    /// Adds `v`; returns true if the dimension grew.
    pub fn insert(&mut self, f: &Field, mut v: Vec<u64>) -> bool {
        if self.reduce(f, &mut v) {
            return false;
        }
        let p = v.iter().position(|x| *x != 0).unwrap();
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for b in self.basis.iter_mut() {
            let c = b[p];
            if c != 0 {
                for (x, y) in b.iter_mut().zip(&v) {
                    if *y != 0 {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|q| *q < p);
        self.pivots.insert(pos, p);
        self.basis.insert(pos, v);
        true
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(f, b.clone());
        }
        s
    }
}

/// Null space of the map `x -> M x`, with `M` given as dense rows of width `n`.
pub fn kernel(f: &Field, rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let rs = Subspace::span(f, n, rows.iter().cloned());
    let free: Vec<usize> = (0..n).filter(|c| !rs.pivots.contains(c)).collect();
    free.iter()
        .map(|&c| {
            let mut v = vec![0u64; n];
            v[c] = 1;
            for (b, &p) in rs.basis.iter().zip(&rs.pivots) {
                v[p] = f.neg(b[c]);
            }
            v
        })
        .collect()
}

/// Quotient `Z / D` for subspaces `D <= Z`, with chosen representatives.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub reps: Vec<Vec<u64>>,
    pub denominator: Subspace,
    combined: Subspace,
    // coordinates of each combined basis vector in terms of reps followed by the denominator basis
    tags: Vec<Vec<u64>>,
}

impl Quotient {
    pub fn new(f: &Field, z: &Subspace, d: &Subspace) -> Self {
        let mut reps = Vec::new();
        let mut acc = d.clone();
        for b in &z.basis {
            if acc.insert(f, b.clone()) {
                reps.push(b.clone());
            }
        }
        let n = z.dim_ambient;
        let k = reps.len() + d.dim();
        let gens: Vec<Vec<u64>> = reps.iter().chain(d.basis.iter()).cloned().collect();
        // track coordinates while building an echelon form of the generators
        let mut combined = Subspace::zero(n);
        let mut tags: Vec<Vec<u64>> = Vec::new();
        for (g_idx, g) in gens.iter().enumerate() {
            let mut v = g.clone();
            let mut t = vec![0u64; k];
            t[g_idx] = 1;
            for ((b, tag), &p) in combined.basis.iter().zip(&tags).zip(&combined.pivots) {
                let c = v[p];
                if c != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                    for (x, y) in t.iter_mut().zip(tag) {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                }
            }
            let p = v.iter().position(|x| *x != 0).expect("generators are independent");
            let inv = f.inv(v[p]);
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for x in t.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for (b, tag) in combined.basis.iter_mut().zip(tags.iter_mut()) {
                let c = b[p];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                    for (x, y) in tag.iter_mut().zip(&t) {
                        *x = f.sub(*x, f.mul(c, *y));
                    }
                }
            }
            let pos = combined.pivots.partition_point(|q| *q < p);
            combined.pivots.insert(pos, p);
            combined.basis.insert(pos, v);
            tags.insert(pos, t);
        }
        Quotient {
            reps,
            denominator: d.clone(),
            combined,
            tags,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `v` in the representative basis, or
    /// `None` when `v` does not lie in `Z`.
    pub fn coords(&self, f: &Field, v: &[u64]) -> Option<Vec<u64>> {
        let mut w = v.to_vec();
        let k = self.tags.first().map_or(self.reps.len(), |t| t.len());
        let mut coeff = vec![0u64; k];
        for ((b, tag), &p) in self
            .combined
            .basis
            .iter()
            .zip(&self.tags)
            .zip(&self.combined.pivots)
        {
            let c = w[p];
            if c != 0 {
                for (x, y) in w.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, *y));
                }
                for (x, y) in coeff.iter_mut().zip(tag) {
                    *x = f.add(*x, f.mul(c, *y));
                }
            }
        }
        if w.iter().any(|x| *x != 0) {
            return None;
        }
        coeff.truncate(self.reps.len());
        Some(coeff)
    }
}

/// Rank of a dense matrix given by rows.
pub fn dense_rank(f: &Field, rows: &[Vec<u64>]) -> usize {
    let n = rows.first().map_or(0, |r| r.len());
    Subspace::span(f, n, rows.iter().cloned()).dim()
}
