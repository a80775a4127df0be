//! Tensors built on first use.
//!
//! Clock structures at large ω (a 43200-state wall clock, say) are used
//! through their structured accessors only; their dense `ω³`-entry
//! multiplication tensors must never be built unless a law check asks.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::tensor::Tensor;

type Builder = Arc<dyn Fn() -> Tensor + Send + Sync>;

#[derive(Clone)]
pub struct LazyTensor {
    cell: Arc<OnceLock<Tensor>>,
    build: Builder,
}

impl LazyTensor {
    pub fn new(build: impl Fn() -> Tensor + Send + Sync + 'static) -> Self {
        Self { cell: Arc::new(OnceLock::new()), build: Arc::new(build) }
    }

    pub fn ready(t: Tensor) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(t.clone());
        Self { cell: Arc::new(cell), build: Arc::new(move || t.clone()) }
    }

    pub fn get(&self) -> &Tensor {
        self.cell.get_or_init(|| (self.build)())
    }

    pub fn is_built(&self) -> bool {
        self.cell.get().is_some()
    }
}

impl fmt::Debug for LazyTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell.get() {
            Some(t) => t.fmt(f),
            None => write!(f, "LazyTensor(<unbuilt>)"),
        }
    }
}
