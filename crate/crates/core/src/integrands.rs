//! Built-in test integrands and the name registry used by the CLI.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::scalar::Scalar;

/// Names accepted by [`registry_lookup`].
pub const REGISTRY_NAMES: [&str; 5] = ["const", "disc", "gauss2d", "gauss3d", "gaussNd"];

/// Indicator of the closed unit disc restricted to the unit square.
/// Integrates to `pi/4`.
#[inline]
pub fn disc_indicator<T: Scalar>(x: &[T]) -> T {
    if x[0] * x[0] + x[1] * x[1] <= T::one() {
        T::one()
    } else {
        T::zero()
    }
}

/// `exp(-alpha |x|^2)`.
#[inline]
pub fn gaussian<T: Scalar>(x: &[T], alpha: T) -> T {
    let r2 = x.iter().fold(T::zero(), |acc, &v| acc + v * v);
    (-alpha * r2).exp()
}

/// `prod_k int_0^1 exp(-alpha t^2) dt = (sqrt(pi) erf(sqrt(alpha)) / (2 sqrt(alpha)))^dim`.
pub fn gaussian_exact(alpha: f64, dim: usize) -> f64 {
    let s = alpha.sqrt();
    let one_axis = std::f64::consts::PI.sqrt() * libm::erf(s) / (2.0 * s);
    one_axis.powi(dim as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Const(f64),
    Disc,
    Gauss(f64),
}

/// A registry integrand with its parameters and exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedIntegrand {
    pub name: String,
    pub dim: usize,
    pub params: BTreeMap<String, f64>,
    pub exact_value: Option<f64>,
    kind: Kind,
}

impl NamedIntegrand {
    pub fn constant(c: f64, dim: usize) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c must be finite, got {c}"
            )));
        }
        check_dim(dim)?;
        Ok(Self {
            name: "const".into(),
            dim,
            params: BTreeMap::from([("c".to_string(), c)]),
            exact_value: Some(c),
            kind: Kind::Const(c),
        })
    }

    pub fn disc() -> Self {
        Self {
            name: "disc".into(),
            dim: 2,
            params: BTreeMap::new(),
            exact_value: Some(std::f64::consts::FRAC_PI_4),
            kind: Kind::Disc,
        }
    }

    /// `exp(-alpha |x|^2)` on `[0,1)^dim`. Mass concentrates at the origin
    /// as `alpha` grows; `alpha` must be positive.
    pub fn gaussian(name: &str, alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive (the integrand is exp(-alpha |x|^2)); got {alpha}"
            )));
        }
        check_dim(dim)?;
        Ok(Self {
            name: name.into(),
            dim,
            params: BTreeMap::from([
                ("alpha".to_string(), alpha),
                ("dim".to_string(), dim as f64),
            ]),
            exact_value: Some(gaussian_exact(alpha, dim)),
            kind: Kind::Gauss(alpha),
        })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidParameter("dim must be at least 1".into()))
    } else {
        Ok(())
    }
}

impl<T: Scalar> Integrand<T> for NamedIntegrand {
    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn eval(&self, x: &[T]) -> T {
        match self.kind {
            Kind::Const(c) => T::of(c),
            Kind::Disc => disc_indicator(x),
            Kind::Gauss(alpha) => gaussian(x, T::of(alpha)),
        }
    }

    fn exact(&self) -> Option<T> {
        self.exact_value.map(T::of)
    }
}

fn param(params: &BTreeMap<String, f64>, key: &str, name: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("`{name}` requires parameter `{key}`")))
}

fn dim_param(params: &BTreeMap<String, f64>, name: &str, default: Option<usize>) -> Result<usize> {
    match (params.get("dim"), default) {
        (Some(&d), _) if d >= 1.0 && d.fract() == 0.0 => Ok(d as usize),
        (Some(&d), _) => Err(Error::InvalidParameter(format!(
            "dim must be a positive integer, got {d}"
        ))),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::InvalidParameter(format!(
            "`{name}` requires parameter `dim`"
        ))),
    }
}

/// Look up a built-in integrand by name.
///
/// | name      | params               | dim            |
/// |-----------|----------------------|----------------|
/// | `const`   | `c` (default 1)      | `dim` or 2     |
/// | `disc`    |                      | 2              |
/// | `gauss2d` | `alpha`              | 2              |
/// | `gauss3d` | `alpha`              | 3              |
/// | `gaussNd` | `alpha`, `dim`       | `dim`          |
pub fn registry_lookup(name: &str, params: &BTreeMap<String, f64>) -> Result<NamedIntegrand> {
    match name {
        "const" => NamedIntegrand::constant(
            params.get("c").copied().unwrap_or(1.0),
            dim_param(params, name, Some(2))?,
        ),
        "disc" => Ok(NamedIntegrand::disc()),
        "gauss2d" => NamedIntegrand::gaussian(name, param(params, "alpha", name)?, 2),
        "gauss3d" => NamedIntegrand::gaussian(name, param(params, "alpha", name)?, 3),
        "gaussNd" => NamedIntegrand::gaussian(
            name,
            param(params, "alpha", name)?,
            dim_param(params, name, None)?,
        ),
        _ => Err(Error::UnknownIntegrand {
            name: name.into(),
            available: REGISTRY_NAMES.join(", "),
        }),
    }
}
