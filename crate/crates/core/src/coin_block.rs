//! 2×2 blocks of lattice operators, i.e. operators on coin ⊗ walker space.

use std::ops::Mul;

use num_complex::Complex64;

use crate::laurent::LaurentOperator;

/// A 2×2 array of [`LaurentOperator`]s indexed by coin `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinBlock {
    entries: [[LaurentOperator; 2]; 2],
}

impl CoinBlock {
    pub fn new(entries: [[LaurentOperator; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        Self::new([
            [LaurentOperator::identity(), LaurentOperator::zero()],
            [LaurentOperator::zero(), LaurentOperator::identity()],
        ])
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentOperator {
        &self.entries[row][col]
    }

    /// Block adjoint: `(B†)_{ij} = (B_{ji})†`.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new([
            [e[0][0].adjoint(), e[1][0].adjoint()],
            [e[0][1].adjoint(), e[1][1].adjoint()],
        ])
    }

    /// `self^n` under block multiplication; `n = 0` gives the identity block.
    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = self * &acc;
        }
        let span = self.max_degree_span();
        debug_assert!(acc.max_degree_span() <= span * n as i64);
        acc
    }

    /// Applies the block to a coin-space column `(top, bottom)` of lattice operators.
    pub fn apply(&self, column: (&LaurentOperator, &LaurentOperator)) -> (LaurentOperator, LaurentOperator) {
        let e = &self.entries;
        (
            &(&e[0][0] * column.0) + &(&e[0][1] * column.1),
            &(&e[1][0] * column.0) + &(&e[1][1] * column.1),
        )
    }

    /// Contracts the block with a coin vector: `(α c + β d, γ c + δ d)`.
    pub fn contract(&self, c: Complex64, d: Complex64) -> (LaurentOperator, LaurentOperator) {
        let e = &self.entries;
        (
            &e[0][0].scale(c) + &e[0][1].scale(d),
            &e[1][0].scale(c) + &e[1][1].scale(d),
        )
    }

    fn max_degree_span(&self) -> i64 {
        self.entries
            .iter()
            .flatten()
            .map(LaurentOperator::degree_span)
            .max()
            .unwrap_or(0)
    }

    /// Worst coefficient residual of `B·B† - 1` over all four entries.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self * &self.adjoint();
        let id = Self::identity();
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| prod.entry(i, j).max_abs_diff(id.entry(i, j)))
            .fold(0.0, f64::max)
    }
}

impl Mul for &CoinBlock {
    type Output = CoinBlock;

    fn mul(self, rhs: &CoinBlock) -> CoinBlock {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        CoinBlock::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}
