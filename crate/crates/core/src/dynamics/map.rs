use crate::scalar::{euclidean, Scalar};

use super::{DynError, Result, Trajectory};

/// A weight-tied, input-injected map `u_j = T(u_{j-1}, d)` with a readout `P(u)`.
///
/// Implementations must be pure: the same `(u, d)` always yields the same output.
pub trait IterativeMap<T: Scalar> {
    type Input: ?Sized;
    type Output;

    /// Latent dimension `n`.
    fn dim(&self) -> usize;

    /// Writes `T(u, d)` into `out` (same length as `u`).
    fn update(&self, u: &[T], d: &Self::Input, out: &mut [T]);

    fn readout(&self, u: &[T]) -> Self::Output;
}

/// Map defined by a closure; the readout returns the latent state itself.
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Scalar, F> IterativeMap<T> for FnMap<F>
where
    F: Fn(&[T], &[T], &mut [T]),
{
    type Input = [T];
    type Output = Vec<T>;

    fn dim(&self) -> usize {
        self.dim
    }

    fn update(&self, u: &[T], d: &[T], out: &mut [T]) {
        (self.f)(u, d, out)
    }

    fn readout(&self, u: &[T]) -> Vec<T> {
        u.to_vec()
    }
}

/// `T(u, d) = W u + B d + b`, readout `P(u) = R u`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<T> {
    dim: usize,
    input_dim: usize,
    output_dim: usize,
    /// `dim x dim`, row-major.
    weight: Vec<T>,
    /// `dim x input_dim`, row-major.
    injection: Vec<T>,
    bias: Vec<T>,
    /// `output_dim x dim`, row-major.
    readout: Vec<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn new(
        dim: usize,
        input_dim: usize,
        output_dim: usize,
        weight: Vec<T>,
        injection: Vec<T>,
        bias: Vec<T>,
        readout: Vec<T>,
    ) -> Result<Self> {
        let shapes = [
            ("weight", weight.len(), dim * dim),
            ("injection", injection.len(), dim * input_dim),
            ("bias", bias.len(), dim),
            ("readout", readout.len(), output_dim * dim),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(DynError::Param(format!("{name} has {got} entries, expected {want}")));
            }
        }
        Ok(Self { dim, input_dim, output_dim, weight, injection, bias, readout })
    }

    /// Scalar map `u -> a u + b` with no input and identity readout.
    pub fn scalar(a: T, b: T) -> Self {
        Self {
            dim: 1,
            input_dim: 0,
            output_dim: 1,
            weight: vec![a],
            injection: vec![],
            bias: vec![b],
            readout: vec![T::one()],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }
}

impl<T: Scalar> IterativeMap<T> for AffineMap<T> {
    type Input = [T];
    type Output = Vec<T>;

    fn dim(&self) -> usize {
        self.dim
    }

    fn update(&self, u: &[T], d: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            let w = &self.weight[i * self.dim..(i + 1) * self.dim];
            let inj = &self.injection[i * self.input_dim..(i + 1) * self.input_dim];
            let wu: T = w.iter().zip(u).map(|(&a, &b)| a * b).sum();
            let bd: T = inj.iter().zip(d).map(|(&a, &b)| a * b).sum();
            *o = wu + bd + self.bias[i];
        }
    }

    fn readout(&self, u: &[T]) -> Vec<T> {
        self.readout.chunks_exact(self.dim).map(|row| row.iter().zip(u).map(|(&a, &b)| a * b).sum()).collect()
    }
}

fn check_finite<T: Scalar>(u: &[T], index: usize) -> Result<()> {
    if u.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(DynError::NumericalDivergence { index })
    }
}

/// `[u0, T(u0, d), T(T(u0, d), d), ...]`, `steps + 1` points.
pub fn iterate<T, M>(map: &M, d: &M::Input, u0: &[T], steps: usize) -> Result<Trajectory<T>>
where
    T: Scalar,
    M: IterativeMap<T> + ?Sized,
{
    let n = map.dim();
    if u0.len() != n {
        return Err(DynError::Param(format!("u0 has dimension {}, map expects {n}", u0.len())));
    }
    check_finite(u0, 0)?;
    let mut data = Vec::with_capacity(n * (steps + 1));
    data.extend_from_slice(u0);
    let mut next = vec![T::zero(); n];
    for j in 1..=steps {
        map.update(&data[(j - 1) * n..j * n], d, &mut next);
        check_finite(&next, j)?;
        data.extend_from_slice(&next);
    }
    Trajectory::new(n, data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult<T> {
    pub u_star: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: T,
}

/// Picard iteration until `|u_{j+1} - u_j|_2 <= tol` or `max_iter` updates.
pub fn fixed_point_solve<T, M>(map: &M, d: &M::Input, u0: &[T], tol: T, max_iter: usize) -> Result<FixedPointResult<T>>
where
    T: Scalar,
    M: IterativeMap<T> + ?Sized,
{
    if !(tol > T::zero()) {
        return Err(DynError::Param(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(DynError::Param("max_iter must be at least 1".into()));
    }
    if u0.len() != map.dim() {
        return Err(DynError::Param(format!("u0 has dimension {}, map expects {}", u0.len(), map.dim())));
    }
    check_finite(u0, 0)?;
    let mut u = u0.to_vec();
    let mut next = vec![T::zero(); u.len()];
    let mut residual = T::infinity();
    for j in 1..=max_iter {
        map.update(&u, d, &mut next);
        check_finite(&next, j)?;
        residual = euclidean(&u, &next);
        std::mem::swap(&mut u, &mut next);
        if residual <= tol {
            return Ok(FixedPointResult { u_star: u, iterations: j, converged: true, final_residual: residual });
        }
    }
    Ok(FixedPointResult { u_star: u, iterations: max_iter, converged: false, final_residual: residual })
}
