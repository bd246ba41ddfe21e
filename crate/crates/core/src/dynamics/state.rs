use crate::error::{Error, Result};
use crate::pattern::{Pattern, PatternStore};

/// Configuration `σ` bound to a store, with `⟨ξ^μ, σ⟩` cached for every `μ`.
///
/// The cache is patched in place on every flip
/// (`o^μ ← o^μ + 2 σ_i^new ξ_i^μ`), so it always equals a full
/// recomputation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkState<'s> {
    store: &'s PatternStore,
    sigma: Pattern,
    overlaps: Vec<i64>,
    tie_count: u64,
    reference: Option<usize>,
}

impl<'s> NetworkState<'s> {
    pub fn new(store: &'s PatternStore, sigma: Pattern) -> Result<Self> {
        let overlaps = store.overlaps(&sigma)?;
        Ok(Self {
            store,
            sigma,
            overlaps,
            tie_count: 0,
            reference: None,
        })
    }

    /// Starts at stored pattern `mu` and designates it as the reference.
    pub fn at_pattern(store: &'s PatternStore, mu: usize) -> Result<Self> {
        let mut state = Self::new(store, store.get(mu)?.clone())?;
        state.reference = Some(mu);
        Ok(state)
    }

    /// Designates the pattern whose term is reported as the signal in
    /// exponential-model decisions.
    pub fn set_reference(&mut self, mu: Option<usize>) -> Result<()> {
        if let Some(mu) = mu {
            self.store.get(mu)?;
        }
        self.reference = mu;
        Ok(())
    }

    #[inline]
    pub fn reference(&self) -> Option<usize> {
        self.reference
    }

    #[inline]
    pub fn store(&self) -> &'s PatternStore {
        self.store
    }

    #[inline]
    pub fn sigma(&self) -> &Pattern {
        &self.sigma
    }

    #[inline]
    pub fn overlaps(&self) -> &[i64] {
        &self.overlaps
    }

    #[inline]
    pub fn tie_count(&self) -> u64 {
        self.tie_count
    }

    #[inline]
    pub fn n_neurons(&self) -> usize {
        self.sigma.n_neurons()
    }

    pub(crate) fn record_tie(&mut self) {
        self.tie_count += 1;
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n_neurons() {
            return Err(Error::NeuronOutOfRange {
                index: i,
                n_neurons: self.n_neurons(),
            });
        }
        Ok(())
    }

    /// Sets `σ_i` to `value`, patching the overlap cache. Returns whether the
    /// spin changed.
    pub fn set_spin(&mut self, i: usize, value: i8) -> Result<bool> {
        self.check_index(i)?;
        if self.sigma.spin(i) == value {
            return Ok(false);
        }
        self.sigma.set_spin(i, value);
        let delta = 2 * i64::from(value);
        for (o, plus) in self.overlaps.iter_mut().zip(self.store.column_bits(i)) {
            *o += if plus { delta } else { -delta };
        }
        Ok(true)
    }

    /// True when the cache equals a full recomputation.
    pub fn is_consistent(&self) -> bool {
        self.store.overlaps(&self.sigma).as_deref() == Ok(self.overlaps.as_slice())
    }

    /// Classical Hopfield energy up to the factor `1/N`: `-Σ_μ ⟨ξ^μ, σ⟩²`.
    pub fn classical_energy(&self) -> i64 {
        -self.overlaps.iter().map(|o| o * o).sum::<i64>()
    }
}
