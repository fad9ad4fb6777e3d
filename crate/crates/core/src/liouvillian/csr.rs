use num_complex::Complex64;

/// Square compressed-sparse-row matrix.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Csr {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl Csr {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Duplicates are summed in sorted order; exact zeros are dropped.
    pub fn from_triplets(n: usize, mut trips: Vec<(usize, usize, Complex64)>) -> Self {
        trips.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(trips.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(trips.len());
        let mut rows = Vec::with_capacity(trips.len());
        let mut i = 0;
        while i < trips.len() {
            let (r, c, mut v) = trips[i];
            i += 1;
            while i < trips.len() && trips[i].0 == r && trips[i].1 == c {
                v += trips[i].2;
                i += 1;
            }
            if v.re != 0.0 || v.im != 0.0 {
                rows.push(r);
                indices.push(c);
                values.push(v);
            }
        }
        for &r in &rows {
            indptr[r + 1] += 1;
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        Self {
            n,
            indptr,
            indices,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *yr = acc;
        }
    }

    pub fn adjoint(&self) -> Csr {
        let trips = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Csr::from_triplets(self.n, trips)
    }

    pub fn scaled(&self, f: f64) -> Csr {
        if f == 0.0 {
            return Csr::zeros(self.n);
        }
        Csr {
            n: self.n,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| v * f).collect(),
        }
    }

    pub fn add(&self, other: &Csr) -> Csr {
        debug_assert_eq!(self.n, other.n);
        let trips = self.triplets().chain(other.triplets()).collect();
        Csr::from_triplets(self.n, trips)
    }

    /// Indices reachable from `seeds` along the nonzero pattern, where an
    /// entry at `(r, c)` is an edge `c → r`. Returned sorted.
    pub fn reachable_from(&self, seeds: &[usize]) -> Vec<usize> {
        let adj = self.adjoint();
        let mut seen = vec![false; self.n];
        let mut stack: Vec<usize> = Vec::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(c) = stack.pop() {
            for (r, _) in adj.row(c) {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    /// Principal submatrix on the sorted index set `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Csr {
        let mut local = vec![usize::MAX; self.n];
        for (i, &g) in keep.iter().enumerate() {
            local[g] = i;
        }
        let mut trips = Vec::new();
        for (i, &g) in keep.iter().enumerate() {
            for (c, v) in self.row(g) {
                if local[c] != usize::MAX {
                    trips.push((i, local[c], v));
                }
            }
        }
        Csr::from_triplets(keep.len(), trips)
    }
}
