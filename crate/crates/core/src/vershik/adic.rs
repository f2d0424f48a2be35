use std::fmt;

use crate::error::{Error, Result};

/// A truncated `beta`-adic integer, least significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdicAddress {
    beta: usize,
    digits: Vec<usize>,
}

impl AdicAddress {
    pub fn new(beta: usize, digits: Vec<usize>) -> Result<Self> {
        if beta < 2 {
            return Err(Error::InvalidArgument(format!("base must be at least 2, got {beta}")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidArgument("addresses have at least one digit".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= beta) {
            return Err(Error::InvalidArgument(format!("digit {d} outside base {beta}")));
        }
        Ok(Self { beta, digits })
    }

    pub fn zeros(beta: usize, len: usize) -> Result<Self> {
        Self::new(beta, vec![0; len])
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn digit(&self, j: usize) -> usize {
        self.digits[j]
    }

    pub fn is_final(&self) -> bool {
        self.digits.iter().all(|&d| d == self.beta - 1)
    }

    pub fn is_initial(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// `min{n >= 1 : z_{n-1} < beta - 1}`, or `None` when every digit is
    /// `beta - 1`.
    pub fn n_omega(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d < self.beta - 1).map(|j| j + 1)
    }

    /// The first `len` digits.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::LevelMismatch { expected: self.len(), found: len });
        }
        Ok(Self { beta: self.beta, digits: self.digits[..len].to_vec() })
    }
}

impl fmt::Display for AdicAddress {
    /// Digits separated by nothing when `beta <= 10`, by dots otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.beta <= 10 { "" } else { "." };
        let s: Vec<String> = self.digits.iter().map(usize::to_string).collect();
        f.write_str(&s.join(sep))
    }
}

/// `[i]_{beta,n}`.
pub fn beta_expand(i: u128, beta: usize, n: usize) -> Result<AdicAddress> {
    let range = Error::RangeError { index: i, beta, digits: n };
    if n == 0 || beta < 2 {
        return Err(range);
    }
    match (beta as u128).checked_pow(n as u32) {
        Some(limit) if i >= limit => return Err(range),
        _ => {}
    }
    let mut digits = Vec::with_capacity(n);
    let mut rest = i;
    for _ in 0..n {
        digits.push((rest % beta as u128) as usize);
        rest /= beta as u128;
    }
    AdicAddress::new(beta, digits)
}

/// `i_0 + i_1 beta + ... + i_{n-1} beta^{n-1}`; saturates above `u128::MAX`.
pub fn address_to_index(a: &AdicAddress) -> u128 {
    a.digits
        .iter()
        .rev()
        .fold(0u128, |acc, &d| acc.saturating_mul(a.beta as u128).saturating_add(d as u128))
}

/// `1 (+)_n a`: zero the leading run of `beta - 1` digits and increment the
/// first digit below `beta - 1`.
pub fn add_one(a: &AdicAddress) -> Result<AdicAddress> {
    let j = a.n_omega().ok_or(Error::FinalAddress)? - 1;
    let mut digits = a.digits.clone();
    for d in &mut digits[..j] {
        *d = 0;
    }
    digits[j] += 1;
    Ok(AdicAddress { beta: a.beta, digits })
}

/// The inverse of [`add_one`]; fails on the all-zero address.
pub fn sub_one(a: &AdicAddress) -> Result<AdicAddress> {
    let j = a.digits.iter().position(|&d| d > 0).ok_or(Error::FinalAddress)?;
    let mut digits = a.digits.clone();
    for d in &mut digits[..j] {
        *d = a.beta - 1;
    }
    digits[j] -= 1;
    Ok(AdicAddress { beta: a.beta, digits })
}

/// Truncated `beta`-adic sum, carrying left to right.
pub fn adic_add(a: &AdicAddress, b: &AdicAddress) -> Result<AdicAddress> {
    if a.beta != b.beta || a.len() != b.len() {
        return Err(Error::Mismatch);
    }
    let mut carry = 0;
    let digits = a
        .digits
        .iter()
        .zip(&b.digits)
        .map(|(&x, &y)| {
            let s = x + y + carry;
            carry = s / a.beta;
            s % a.beta
        })
        .collect();
    Ok(AdicAddress { beta: a.beta, digits })
}
