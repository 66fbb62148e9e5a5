use super::OperadError;

/// Element of `Σ_k` acting on the labels `1..=k`; `images[l-1]` is the image
/// of `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, OperadError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i == 0 || i > k || seen[i - 1] {
                return Err(OperadError::Malformed(format!(
                    "{images:?} is not a permutation of 1..={k}"
                )));
            }
            seen[i - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            images: (1..=k).collect(),
        }
    }

    /// Transposition of `a` and `b` in `Σ_k`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self, OperadError> {
        let mut images: Vec<usize> = (1..=k).collect();
        if a == 0 || b == 0 || a > k || b > k {
            return Err(OperadError::LabelOutOfRange {
                label: a.max(b),
                arity: k,
            });
        }
        images.swap(a - 1, b - 1);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, label: usize) -> usize {
        self.images[label - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// `(self ∘ other)(l) = self(other(l))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, OperadError> {
        if self.len() != other.len() {
            return Err(OperadError::ArityMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&l| self.apply(l)).collect(),
        })
    }

    /// Parity sign, `(-1)^(k - #cycles)`.
    pub fn sign(&self) -> i32 {
        let k = self.images.len();
        let mut visited = vec![false; k];
        let mut cycles = 0;
        for start in 0..k {
            if visited[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.images[i] - 1;
            }
        }
        if (k - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}
