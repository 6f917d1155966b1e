//! Linear algebra over the prime field F_q on encoded points.
//!
//! A vector `v in F_q^N` is the integer `sum_i v_i q^(i-1)`, so `e_1 = 1`,
//! `e_2 = q`, and `F_q^(N-1)` sits inside `F_q^N` as the first `q^(N-1)` points.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    pub q: u32,
    pub n: u32,
}

impl Field {
    pub fn new(q: u32, n: u32) -> Self {
        Field { q, n }
    }

    pub fn size(&self) -> u32 {
        self.q.pow(self.n)
    }

    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            d.push(x % self.q);
            x /= self.q;
        }
        d
    }

    pub fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.q + d % self.q)
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.q == 2 {
            return x ^ y;
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.q + y % self.q) % self.q) * place;
            x /= self.q;
            y /= self.q;
            place *= self.q;
        }
        out
    }

    pub fn scale(&self, a: u32, x: u32) -> u32 {
        let a = a % self.q;
        if a == 0 {
            return 0;
        }
        if a == 1 {
            return x;
        }
        let (mut x, mut out, mut place) = (x, 0, 1);
        while x > 0 {
            out += ((x % self.q) * a % self.q) * place;
            x /= self.q;
            place *= self.q;
        }
        out
    }

    /// `sum_j coords[j] * vectors[j]`.
    pub fn combine(&self, coords: &[u32], vectors: &[u32]) -> u32 {
        coords
            .iter()
            .zip(vectors)
            .fold(0, |acc, (&c, &v)| self.add(acc, self.scale(c, v)))
    }

    /// Permutation of all points induced by the matrix with the given columns.
    pub fn images_of(&self, cols: &[u32], images: &mut [u32]) {
        self.images_with(None, cols, images)
    }

    pub(crate) fn images_with(&self, tables: Option<&AddTables>, cols: &[u32], images: &mut [u32]) {
        images[0] = 0;
        let size = self.size();
        if self.q == 2 {
            for x in 1..size {
                let low = x.trailing_zeros();
                images[x as usize] = images[(x & (x - 1)) as usize] ^ cols[low as usize];
            }
            return;
        }
        if let Some(t) = tables {
            let size = size as usize;
            for x in 1..size {
                let (i, place) = t.low[x];
                let prev = images[x - place as usize];
                images[x] = t.add[prev as usize * size + cols[i as usize] as usize];
            }
            return;
        }
        for x in 1..size {
            let (mut i, mut place, mut y) = (0usize, 1u32, x);
            while y % self.q == 0 {
                y /= self.q;
                i += 1;
                place *= self.q;
            }
            images[x as usize] = self.add(images[(x - place) as usize], cols[i]);
        }
    }
}

/// Lookup tables for odd-characteristic image computation.
pub(crate) struct AddTables {
    /// `add[x * size + y] = x + y`.
    add: Vec<u32>,
    /// Index and place value of the lowest non-zero digit of each point.
    low: Vec<(u32, u32)>,
}

impl AddTables {
    pub(crate) fn new(field: &Field) -> Option<Self> {
        let size = field.size() as usize;
        if field.q == 2 || size > 1024 {
            return None;
        }
        let mut add = vec![0u32; size * size];
        for x in 0..size {
            for y in 0..size {
                add[x * size + y] = field.add(x as u32, y as u32);
            }
        }
        let mut low = vec![(0, 0); size];
        for (x, slot) in low.iter_mut().enumerate().skip(1) {
            let (mut i, mut place, mut y) = (0u32, 1u32, x as u32);
            while y % field.q == 0 {
                y /= field.q;
                i += 1;
                place *= field.q;
            }
            *slot = (i, place);
        }
        Some(AddTables { add, low })
    }
}

/// A basis drawn greedily from `points` (in the given order) together with
/// coordinates of every point of `points` in that basis.
pub struct SpanData {
    pub basis: Vec<u32>,
    pub coords: HashMap<u32, Vec<u32>>,
}

pub fn span_data(field: &Field, points: &[u32]) -> SpanData {
    let mut basis: Vec<u32> = Vec::new();
    // span element -> coordinates (padded lazily)
    let mut span: HashMap<u32, Vec<u32>> = HashMap::from([(0, Vec::new())]);
    for &p in points {
        if span.contains_key(&p) {
            continue;
        }
        let old: Vec<(u32, Vec<u32>)> = span.drain().collect();
        for (s, c) in old {
            for a in 0..field.q {
                let mut cc = c.clone();
                cc.resize(basis.len(), 0);
                cc.push(a);
                span.insert(field.add(s, field.scale(a, p)), cc);
            }
        }
        basis.push(p);
    }
    let d = basis.len();
    let coords = points
        .iter()
        .map(|&p| {
            let mut c = span[&p].clone();
            c.resize(d, 0);
            (p, c)
        })
        .collect();
    SpanData { basis, coords }
}

pub fn dim_span(field: &Field, points: &[u32]) -> usize {
    span_data(field, points).basis.len()
}

/// Whether `vectors` are linearly independent.
pub fn independent(field: &Field, vectors: &[u32]) -> bool {
    dim_span(field, vectors) == vectors.len()
}

pub fn gl_order(n: u32, q: u32) -> BigUint {
    let qn = BigUint::from(q).pow(n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - BigUint::from(q).pow(i)))
}

/// Order of the pointwise stabilizer of a subspace of dimension `d`:
/// `q^(d(N-d)) |GL(N-d, q)|`.
pub fn pointwise_order(n: u32, q: u32, d: u32) -> BigUint {
    BigUint::from(q).pow(d * (n - d)) * gl_order(n - d, q)
}

/// Visits every ordered tuple of `d` independent vectors of `F_q^N`,
/// lexicographically in the encoded points. The callback sees the tuple and
/// the running span membership table of all but the last vector.
pub fn for_each_independent_tuple(field: &Field, d: usize, f: &mut dyn FnMut(&[u32])) {
    let size = field.size() as usize;
    let mut span = vec![false; size];
    span[0] = true;
    let mut tuple = Vec::with_capacity(d);
    rec_tuples(field, d, &mut tuple, &mut span, f);
}

fn rec_tuples(field: &Field, d: usize, tuple: &mut Vec<u32>, span: &mut Vec<bool>, f: &mut dyn FnMut(&[u32])) {
    if tuple.len() == d {
        f(tuple);
        return;
    }
    let size = field.size();
    for v in 1..size {
        if span[v as usize] {
            continue;
        }
        if tuple.len() + 1 == d {
            tuple.push(v);
            f(tuple);
            tuple.pop();
            continue;
        }
        let next = extend_span(field, span, v);
        let mut next_span = next;
        tuple.push(v);
        rec_tuples(field, d, tuple, &mut next_span, f);
        tuple.pop();
    }
}

fn extend_span(field: &Field, span: &[bool], v: u32) -> Vec<bool> {
    let mut next = span.to_vec();
    for (s, &inside) in span.iter().enumerate() {
        if !inside {
            continue;
        }
        let mut w = s as u32;
        for _ in 1..field.q {
            w = field.add(w, v);
            next[w as usize] = true;
        }
    }
    next
}

/// Streams all of GL(N, q) as point permutations. Matrices are visited in
/// lexicographic order of their column tuples; `first` restricts the first
/// column, which is how work is split between threads.
pub fn for_each_matrix(field: &Field, first: Option<u32>, f: &mut dyn FnMut(&[u32], &[u32])) {
    let n = field.n as usize;
    let size = field.size() as usize;
    let mut images = vec![0u32; size];
    let mut span = vec![false; size];
    span[0] = true;
    let mut cols = Vec::with_capacity(n);
    let tables = AddTables::new(field);
    let table = tables.as_ref();
    match first {
        None => rec_matrix(field, table, &mut cols, &span, &mut images, f),
        Some(c) => {
            if c == 0 || c as usize >= size {
                return;
            }
            let next = extend_span(field, &span, c);
            cols.push(c);
            rec_matrix(field, table, &mut cols, &next, &mut images, f);
        }
    }
}

fn rec_matrix(
    field: &Field,
    table: Option<&AddTables>,
    cols: &mut Vec<u32>,
    span: &[bool],
    images: &mut Vec<u32>,
    f: &mut dyn FnMut(&[u32], &[u32]),
) {
    let n = field.n as usize;
    if cols.len() == n {
        field.images_with(table, cols, images);
        f(cols, images);
        return;
    }
    for v in 1..field.size() {
        if span[v as usize] {
            continue;
        }
        cols.push(v);
        if cols.len() == n {
            field.images_with(table, cols, images);
            f(cols, images);
        } else {
            let next = extend_span(field, span, v);
            rec_matrix(field, table, cols, &next, images, f);
        }
        cols.pop();
    }
}

/// Enumerates invertible linear maps of `span(points)` that permute `points`,
/// returned as position permutations `perm[i] = j` meaning `points[i] -> points[j]`.
pub fn linear_symmetries(field: &Field, points: &[u32]) -> Vec<Vec<usize>> {
    let sd = span_data(field, points);
    let index: HashMap<u32, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let d = sd.basis.len();
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    if points.is_empty() {
        return vec![Vec::new()];
    }
    loop {
        let imgs: Vec<u32> = choice.iter().map(|&i| points[i]).collect();
        let mut perm = Vec::with_capacity(points.len());
        let mut seen = vec![false; points.len()];
        let mut ok = true;
        for &p in points {
            let img = field.combine(&sd.coords[&p], &imgs);
            match index.get(&img) {
                Some(&j) if !seen[j] => {
                    seen[j] = true;
                    perm.push(j);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(perm);
        }
        // odometer over K^d
        let mut i = 0;
        loop {
            if i == d {
                out.sort();
                return out;
            }
            choice[i] += 1;
            if choice[i] < points.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_round_trip() {
        let f = Field::new(3, 3);
        for x in 0..f.size() {
            assert_eq!(f.encode(&f.digits(x)), x);
        }
        assert_eq!(f.add(f.encode(&[2, 1, 0]), f.encode(&[2, 2, 1])), f.encode(&[1, 0, 1]));
        assert_eq!(f.scale(2, f.encode(&[1, 2, 0])), f.encode(&[2, 1, 0]));
    }

    #[test]
    fn orders() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(5, 2), BigUint::from(9999360u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn matrix_stream_counts() {
        for (n, q) in [(1, 2), (2, 2), (3, 2), (2, 3), (1, 5)] {
            let f = Field::new(q, n);
            let mut count = 0u64;
            for_each_matrix(&f, None, &mut |_, imgs| {
                let mut seen = vec![false; imgs.len()];
                for &i in imgs {
                    assert!(!seen[i as usize]);
                    seen[i as usize] = true;
                }
                count += 1;
            });
            assert_eq!(BigUint::from(count), gl_order(n, q));
        }
    }

    #[test]
    fn images_are_linear_q3() {
        let f = Field::new(3, 2);
        let cols = [f.encode(&[1, 1]), f.encode(&[2, 1])];
        let mut imgs = vec![0; 9];
        f.images_of(&cols, &mut imgs);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(imgs[f.add(x, y) as usize], f.add(imgs[x as usize], imgs[y as usize]));
            }
        }
    }

    #[test]
    fn symmetries_of_small_sets() {
        let f = Field::new(2, 3);
        // {e1, e2, e1+e2}: GL(2,2) acts as S_3
        assert_eq!(linear_symmetries(&f, &[1, 2, 3]).len(), 6);
        // {0, e1}: only the identity
        assert_eq!(linear_symmetries(&f, &[0, 1]).len(), 1);
        // {e1, e2}: swap allowed
        assert_eq!(linear_symmetries(&f, &[1, 2]).len(), 2);
        // {e1, e2, e3, e1+e2+e3}
        assert_eq!(linear_symmetries(&f, &[1, 2, 4, 7]).len(), 24);
    }

    #[test]
    fn independent_tuples() {
        let f = Field::new(2, 3);
        let mut n = 0;
        for_each_independent_tuple(&f, 2, &mut |t| {
            assert!(independent(&f, t));
            n += 1;
        });
        assert_eq!(n, 7 * 6);
    }
}
