//! Entropy units and the shared `-Σ p log p` kernel.

/// Logarithm base used when reporting an entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyBase {
    /// Natural logarithm.
    Nats,
    /// Base-2 logarithm.
    Bits,
}

impl EntropyBase {
    fn ln_of_base(self) -> f64 {
        match self {
            EntropyBase::Nats => 1.0,
            EntropyBase::Bits => std::f64::consts::LN_2,
        }
    }
}

/// A nonnegative entropy together with the base it was computed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    value: f64,
    base: EntropyBase,
}

impl EntropyValue {
    pub fn new(value: f64, base: EntropyBase) -> Self {
        // Roundoff can push a mathematically zero entropy a hair negative.
        Self { value: value.max(0.0), base }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn base(&self) -> EntropyBase {
        self.base
    }

    /// Re-express the same entropy in another base.
    pub fn to_base(&self, base: EntropyBase) -> EntropyValue {
        if self.base == base {
            return *self;
        }
        let nats = self.value * self.base.ln_of_base();
        EntropyValue::new(nats / base.ln_of_base(), base)
    }
}

/// `-Σ p log p` over a probability slice with the `0 log 0 = 0` convention.
///
/// Entries are trusted to be nonnegative; validation happens at type
/// construction sites.
pub(crate) fn entropy_of_probs(probs: &[f64], base: EntropyBase) -> f64 {
    let nats: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    nats / base.ln_of_base()
}
