//! Lazily evaluated string diagrams over [`Tensor`] boxes.
//!
//! Composites such as `(Δ ⊗ Δ) ; (id ⊗ σ ⊗ id) ; (μ ⊗ μ)` have small
//! endpoints but enormous Kronecker intermediates when materialized. A
//! [`Process`] keeps the wiring symbolic and evaluates it by pushing blocks
//! of input basis columns through the diagram, so only one block of
//! intermediate vectors is alive at a time. Identities and swaps are never
//! materialized, and boxes are applied through their nonzero entries.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::tensor::{
    argmax_norm, EqualityMode, EqualityReport, Tensor, TensorError, TensorResult,
};

/// Target number of complex values alive per intermediate block.
const BLOCK_BUDGET: usize = 1 << 18;

#[derive(Debug)]
struct Sparse {
    tensor: Tensor,
    // (row, col, value) in row-major order
    nonzeros: Vec<(usize, usize, C64)>,
}

impl Sparse {
    fn new(tensor: Tensor) -> Self {
        let cols = tensor.cols();
        let nonzeros = tensor
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(i, z)| (i / cols, i % cols, *z))
            .collect();
        Self { tensor, nonzeros }
    }
}

/// A symbolic composite of boxes, identities and swaps.
#[derive(Clone, Debug)]
pub enum Process {
    Box(Arc<SparseBox>),
    Identity(Vec<usize>),
    /// `A ⊗ B → B ⊗ A` for wire groups `A`, `B`.
    Swap(Vec<usize>, Vec<usize>),
    /// Diagram order: the first process runs first.
    Seq(Arc<Process>, Arc<Process>),
    Par(Arc<Process>, Arc<Process>),
}

/// A tensor box prepared for repeated sparse application.
#[derive(Debug)]
pub struct SparseBox(Sparse);

impl SparseBox {
    pub fn tensor(&self) -> &Tensor {
        &self.0.tensor
    }
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

impl Process {
    pub fn from_tensor(t: Tensor) -> Self {
        Process::Box(Arc::new(SparseBox(Sparse::new(t))))
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        Process::Identity(dims)
    }

    pub fn swap(a: Vec<usize>, b: Vec<usize>) -> Self {
        Process::Swap(a, b)
    }

    /// `self` first, then `next`.
    pub fn then(self, next: Process) -> TensorResult<Self> {
        let (out, inp) = (self.out_dims(), next.in_dims());
        if out != inp {
            return Err(TensorError::DimensionMismatch { expected: inp, found: out });
        }
        Ok(Process::Seq(Arc::new(self), Arc::new(next)))
    }

    pub fn par(self, other: Process) -> Self {
        Process::Par(Arc::new(self), Arc::new(other))
    }

    pub fn in_dims(&self) -> Vec<usize> {
        match self {
            Process::Box(b) => b.tensor().in_dims().to_vec(),
            Process::Identity(d) => d.clone(),
            Process::Swap(a, b) => [a.as_slice(), b.as_slice()].concat(),
            Process::Seq(a, _) => a.in_dims(),
            Process::Par(a, b) => [a.in_dims(), b.in_dims()].concat(),
        }
    }

    pub fn out_dims(&self) -> Vec<usize> {
        match self {
            Process::Box(b) => b.tensor().out_dims().to_vec(),
            Process::Identity(d) => d.clone(),
            Process::Swap(a, b) => [b.as_slice(), a.as_slice()].concat(),
            Process::Seq(_, b) => b.out_dims(),
            Process::Par(a, b) => [a.out_dims(), b.out_dims()].concat(),
        }
    }

    /// Mirror image: reverses sequential order and daggers every box.
    pub fn dagger(&self) -> Process {
        match self {
            Process::Box(b) => Process::from_tensor(b.tensor().dagger()),
            Process::Identity(d) => Process::Identity(d.clone()),
            Process::Swap(a, b) => Process::Swap(b.clone(), a.clone()),
            Process::Seq(a, b) => Process::Seq(Arc::new(b.dagger()), Arc::new(a.dagger())),
            Process::Par(a, b) => Process::Par(Arc::new(a.dagger()), Arc::new(b.dagger())),
        }
    }

    /// Largest intermediate row count reached while applying this process.
    fn peak_rows(&self) -> usize {
        match self {
            Process::Box(b) => b.tensor().rows().max(b.tensor().cols()),
            Process::Identity(d) => product(d),
            Process::Swap(a, b) => product(a) * product(b),
            Process::Seq(a, b) => a.peak_rows().max(b.peak_rows()),
            Process::Par(a, b) => {
                let (ia, ob) = (product(&a.in_dims()), product(&b.out_dims()));
                (ia * b.peak_rows()).max(a.peak_rows() * ob)
            }
        }
    }

    /// Applies the process to a row-major block with `cols` columns whose
    /// rows index the input space.
    fn apply(&self, input: &[C64], cols: usize) -> Vec<C64> {
        match self {
            Process::Identity(_) => input.to_vec(),
            Process::Box(b) => {
                let t = &b.0;
                let rows = t.tensor.rows();
                let mut out = vec![C64::new(0.0, 0.0); rows * cols];
                for &(r, c, v) in &t.nonzeros {
                    let src = &input[c * cols..(c + 1) * cols];
                    let dst = &mut out[r * cols..(r + 1) * cols];
                    for (o, x) in dst.iter_mut().zip(src) {
                        *o += v * x;
                    }
                }
                out
            }
            Process::Swap(a, b) => {
                let (na, nb) = (product(a), product(b));
                let mut out = vec![C64::new(0.0, 0.0); na * nb * cols];
                for i in 0..na {
                    for j in 0..nb {
                        let src = (i * nb + j) * cols;
                        let dst = (j * na + i) * cols;
                        out[dst..dst + cols].copy_from_slice(&input[src..src + cols]);
                    }
                }
                out
            }
            Process::Seq(a, b) => {
                let mid = a.apply(input, cols);
                b.apply(&mid, cols)
            }
            Process::Par(a, b) => {
                let ia = product(&a.in_dims());
                let (ib, ob) = (product(&b.in_dims()), product(&b.out_dims()));
                // rows are (i_a, i_b); act with b on every i_a block
                let mid = if matches!(**b, Process::Identity(_)) {
                    input.to_vec()
                } else {
                    let mut mid = Vec::with_capacity(ia * ob * cols);
                    for blk in input.chunks(ib * cols) {
                        mid.extend(b.apply(blk, cols));
                    }
                    mid
                };
                // now rows are i_a with (o_b, col) flattened into columns
                if matches!(**a, Process::Identity(_)) {
                    mid
                } else {
                    a.apply(&mid, ob * cols)
                }
            }
        }
    }

    fn block_width(&self) -> usize {
        (BLOCK_BUDGET / self.peak_rows().max(1)).max(1)
    }

    /// Output columns `start..start + width` of the materialized tensor,
    /// laid out row-major as `(out_rows, width)`.
    fn column_block(&self, start: usize, width: usize) -> Vec<C64> {
        let n_in = product(&self.in_dims());
        let mut basis = vec![C64::new(0.0, 0.0); n_in * width];
        for k in 0..width {
            basis[(start + k) * width + k] = C64::new(1.0, 0.0);
        }
        self.apply(&basis, width)
    }

    /// Materializes the process as a dense tensor.
    pub fn evaluate(&self) -> Tensor {
        let (in_dims, out_dims) = (self.in_dims(), self.out_dims());
        let (rows, cols) = (product(&out_dims), product(&in_dims));
        let mut entries = vec![C64::new(0.0, 0.0); rows * cols];
        let width = self.block_width();
        let mut start = 0;
        while start < cols {
            let w = width.min(cols - start);
            let block = self.column_block(start, w);
            for r in 0..rows {
                entries[r * cols + start..r * cols + start + w]
                    .copy_from_slice(&block[r * w..(r + 1) * w]);
            }
            start += w;
        }
        Tensor::from_raw(in_dims, out_dims, entries)
    }

    /// Compares two processes block by block without materializing either.
    ///
    /// Uses the same conventions as [`crate::tensor::approx_equal`].
    pub fn compare(&self, other: &Process, tol: f64, mode: EqualityMode) -> TensorResult<EqualityReport> {
        if self.in_dims() != other.in_dims() {
            return Err(TensorError::DimensionMismatch { expected: self.in_dims(), found: other.in_dims() });
        }
        if self.out_dims() != other.out_dims() {
            return Err(TensorError::DimensionMismatch { expected: self.out_dims(), found: other.out_dims() });
        }
        let cols = product(&self.in_dims());
        let width = self.block_width().min(other.block_width());
        let blocks = || (0..cols).step_by(width).map(move |s| (s, width.min(cols - s)));

        let lambda = match mode {
            EqualityMode::Strict => C64::new(1.0, 0.0),
            EqualityMode::UpToGlobalScalar => {
                // anchor: first largest-magnitude entry of `other` in row-major order
                let mut best: Option<(usize, usize, f64)> = None;
                for (s, w) in blocks() {
                    let g = other.column_block(s, w);
                    if let Some((pos, n)) = argmax_norm(&g) {
                        let (r, c) = (pos / w, s + pos % w);
                        let better = match best {
                            None => true,
                            Some((br, bc, bn)) => n > bn || (n == bn && (r, c) < (br, bc)),
                        };
                        if better {
                            best = Some((r, c, n));
                        }
                    }
                }
                match best {
                    Some((r, c, n)) if n > tol => {
                        let f = self.column_block(c, 1)[r];
                        let g = other.column_block(c, 1)[r];
                        f / g
                    }
                    _ => {
                        let mut residual: f64 = 0.0;
                        for (s, w) in blocks() {
                            residual = self.column_block(s, w).iter().map(|z| z.norm()).fold(residual, f64::max);
                        }
                        return Ok(EqualityReport { equal: false, residual, lambda: None });
                    }
                }
            }
        };

        let mut residual: f64 = 0.0;
        for (s, w) in blocks() {
            let f = self.column_block(s, w);
            let g = other.column_block(s, w);
            for (a, b) in f.iter().zip(&g) {
                residual = residual.max((a - lambda * b).norm());
            }
        }
        Ok(match mode {
            EqualityMode::Strict => EqualityReport { equal: residual <= tol, residual, lambda: None },
            EqualityMode::UpToGlobalScalar => EqualityReport {
                equal: residual <= tol && lambda.norm() > tol,
                residual,
                lambda: Some(lambda),
            },
        })
    }
}

impl From<Tensor> for Process {
    fn from(t: Tensor) -> Self {
        Process::from_tensor(t)
    }
}
