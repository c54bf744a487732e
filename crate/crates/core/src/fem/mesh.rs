use crate::error::{Error, Result};

/// Smallest element count accepted.
pub const MIN_ELEMENTS: usize = 10;

/// Uniform mesh of `elements` elements on [0, L].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    elements: usize,
    length: f64,
}

impl Mesh {
    pub fn new(length: f64, elements: usize) -> Result<Self> {
        if elements < MIN_ELEMENTS {
            return Err(Error::Input(format!(
                "mesh needs at least {MIN_ELEMENTS} elements, got {elements}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Input(format!(
                "mesh length must be positive, got {length}"
            )));
        }
        Ok(Self { elements, length })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn node_count(&self) -> usize {
        self.elements + 1
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn element_size(&self) -> f64 {
        self.length / self.elements as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.length * i as f64 / self.elements as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.node(i)).collect()
    }
}
