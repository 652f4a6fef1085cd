//! Binary extension fields GF(2^8) and GF(2^16) with log/antilog tables,
//! plus dense linear algebra over them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Field element. GF(2^8) values use the low byte only.
pub type Elem = u16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    #[default]
    Gf8,
    Gf16,
}

impl FieldSpec {
    pub fn degree(self) -> u32 {
        match self {
            FieldSpec::Gf8 => 8,
            FieldSpec::Gf16 => 16,
        }
    }

    pub fn size(self) -> usize {
        1 << self.degree()
    }

    fn modulus(self) -> u32 {
        match self {
            // x^8 + x^4 + x^3 + x^2 + 1
            FieldSpec::Gf8 => 0x11d,
            // x^16 + x^12 + x^3 + x + 1
            FieldSpec::Gf16 => 0x1100b,
        }
    }

    /// Shared tables for this field, built on first use.
    pub fn field(self) -> &'static GaloisField {
        static GF8: OnceLock<GaloisField> = OnceLock::new();
        static GF16: OnceLock<GaloisField> = OnceLock::new();
        match self {
            FieldSpec::Gf8 => GF8.get_or_init(|| GaloisField::new(self)),
            FieldSpec::Gf16 => GF16.get_or_init(|| GaloisField::new(self)),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gf8" => Ok(FieldSpec::Gf8),
            "gf16" => Ok(FieldSpec::Gf16),
            other => Err(format!("unknown field {other:?}, expected gf8 or gf16")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaloisField {
    spec: FieldSpec,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl GaloisField {
    fn new(spec: FieldSpec) -> Self {
        let q = spec.size();
        let order = q - 1;
        let mut exp = vec![0 as Elem; 2 * order];
        let mut log = vec![0u32; q];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x as Elem;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (q as u32) != 0 {
                x ^= spec.modulus();
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Self { spec, exp, log }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn size(&self) -> usize {
        self.spec.size()
    }

    fn order(&self) -> usize {
        self.spec.size() - 1
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.exp[(self.order() - self.log[a as usize] as usize) % self.order()])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Elem, e: usize) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as usize * (e % self.order())) % self.order();
        self.exp[l]
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| acc ^ self.mul(x, y))
    }

    /// Rank of a dense row-major matrix with `cols` columns.
    pub fn rank(&self, rows: &[Vec<Elem>], cols: usize) -> usize {
        let mut m: Vec<Vec<Elem>> = rows.to_vec();
        self.row_reduce(&mut m, cols)
    }

    /// Reduced row echelon form in place over the first `cols` columns.
    /// Returns the rank.
    fn row_reduce(&self, m: &mut [Vec<Elem>], cols: usize) -> usize {
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]).expect("pivot is nonzero");
            for x in m[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[col] == 0 {
                    continue;
                }
                let f = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= self.mul(f, p);
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Solves `A x = y` for `x` of length `cols`, where `A` may have more
    /// rows than columns. Returns `None` unless `A` has full column rank and
    /// the system is consistent.
    pub fn solve(&self, a: &[Vec<Elem>], y: &[Elem], cols: usize) -> Option<Vec<Elem>> {
        let mut m: Vec<Vec<Elem>> = a
            .iter()
            .zip(y)
            .map(|(row, &rhs)| {
                let mut r = row.clone();
                r.push(rhs);
                r
            })
            .collect();
        let rank = self.row_reduce(&mut m, cols);
        if rank < cols {
            return None;
        }
        if m[cols..].iter().any(|row| row[cols] != 0) {
            return None;
        }
        // Full column rank: the first `cols` rows are the identity.
        Some(m[..cols].iter().map(|row| row[cols]).collect())
    }
}
