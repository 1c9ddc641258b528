//! Exact scalars, exponent vectors and sparse (Laurent) polynomials.

mod expvec;
mod parse;
mod poly;
mod rational;
mod scalar;

pub use expvec::ExpVec;
pub use parse::{parse_laurent, parse_poly_h};
pub use poly::{binomial, ExponentDomain, Laurent, LaurentPoly, Ordinary, Poly, PolyH};
pub use rational::{fmt_rational, parse_rational, q, qr, rational_pow, QVec, Rational};
