//! Variable-selection strategies for the multivariate model, looked up by name.

use crate::logit::UnivariateResult;

/// Inputs shared by every selection strategy.
#[derive(Debug, Clone, Copy)]
pub struct SelectionContext<'a> {
    /// Univariate screen, one entry per candidate variable in grouping order.
    pub screen: &'a [UnivariateResult],
    /// Significance level for the univariate Wald test.
    pub alpha: f64,
    /// Variables kept regardless of significance.
    pub forced: &'a [String],
}

impl SelectionContext<'_> {
    pub fn is_significant(&self, j: usize) -> bool {
        self.screen[j].p_value().is_some_and(|p| p < self.alpha)
    }

    pub fn is_forced(&self, j: usize) -> bool {
        self.forced.iter().any(|f| *f == self.screen[j].variable_name)
    }
}

pub trait VariableSelection: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Indices into `ctx.screen`, ascending.
    fn select(&self, ctx: &SelectionContext<'_>) -> Vec<usize>;
}

/// Significant variables plus the configured forced-in list.
#[derive(Debug, Default, Clone, Copy)]
pub struct ForcedInclusion;

impl VariableSelection for ForcedInclusion {
    fn name(&self) -> &'static str {
        "forced"
    }

    fn description(&self) -> &'static str {
        "univariately significant variables plus every forced-in variable"
    }

    fn select(&self, ctx: &SelectionContext<'_>) -> Vec<usize> {
        (0..ctx.screen.len())
            .filter(|&j| ctx.is_significant(j) || ctx.is_forced(j))
            .collect()
    }
}

/// Only variables significant in the univariate screen.
#[derive(Debug, Default, Clone, Copy)]
pub struct SignificantOnly;

impl VariableSelection for SignificantOnly {
    fn name(&self) -> &'static str {
        "strict"
    }

    fn description(&self) -> &'static str {
        "univariately significant variables only"
    }

    fn select(&self, ctx: &SelectionContext<'_>) -> Vec<usize> {
        (0..ctx.screen.len()).filter(|&j| ctx.is_significant(j)).collect()
    }
}

/// Named selection strategies, in registration order.
pub struct SelectionRegistry {
    strategies: Vec<Box<dyn VariableSelection>>,
}

impl SelectionRegistry {
    pub fn empty() -> Self {
        Self {
            strategies: Vec::new(),
        }
    }

    /// `forced` and `strict`.
    pub fn with_defaults() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(ForcedInclusion));
        registry.register(Box::new(SignificantOnly));
        registry
    }

    /// Adds a strategy, replacing any with the same name.
    pub fn register(&mut self, strategy: Box<dyn VariableSelection>) {
        match self.strategies.iter().position(|s| s.name() == strategy.name()) {
            Some(i) => self.strategies[i] = strategy,
            None => self.strategies.push(strategy),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn VariableSelection> {
        self.strategies
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.iter().map(|s| s.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn VariableSelection> {
        self.strategies.iter().map(|s| s.as_ref())
    }
}

impl Default for SelectionRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}
