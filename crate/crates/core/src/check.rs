use serde::Serialize;

/// Both sides of an identity that is expected to hold exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: PartialEq> Comparison<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        Comparison { lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}
