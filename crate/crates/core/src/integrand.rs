use crate::scalar::Scalar;

/// A deterministic real-valued function on `[0,1)^d`.
pub trait Integrand<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[T]) -> T;

    /// The exact integral over the unit hypercube, when known.
    fn exact(&self) -> Option<T> {
        None
    }
}

/// Adapts a closure into an [`Integrand`].
pub struct FnIntegrand<F> {
    dim: usize,
    f: F,
    exact: Option<f64>,
}

impl<F> FnIntegrand<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self {
            dim,
            f,
            exact: None,
        }
    }

    pub fn with_exact(mut self, exact: f64) -> Self {
        self.exact = Some(exact);
        self
    }
}

impl<T, F> Integrand<T> for FnIntegrand<F>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[T]) -> T {
        (self.f)(x)
    }

    fn exact(&self) -> Option<T> {
        self.exact.map(T::of)
    }
}

impl<T: Scalar, I: Integrand<T> + ?Sized> Integrand<T> for &I {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &[T]) -> T {
        (**self).eval(x)
    }

    fn exact(&self) -> Option<T> {
        (**self).exact()
    }
}
