use super::bitvec::BitVector;

/// Incrementally built echelon basis used to test linear independence of a
/// stream of vectors.
#[derive(Debug, Clone)]
pub struct Echelon {
    len: usize,
    basis: Vec<(usize, BitVector)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.len
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len, "echelon length mismatch");
        let mut x = v.clone();
        for (p, b) in &self.basis {
            if x.get(*p) {
                x.xor_assign(b);
            }
        }
        x
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the basis; returns whether it was.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let x = self.reduce(v);
        match x.first_one() {
            Some(p) => {
                self.basis.push((p, x));
                true
            }
            None => false,
        }
    }
}
