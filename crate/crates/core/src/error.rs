// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The covariance matrix cannot describe a quantum state (or a measure is
    /// undefined on it).
    #[error("non-physical state: {0}")]
    NonPhysicalState(String),

    /// The state is valid but outside the class a closed formula applies to.
    #[error("unsupported covariance form: {0}")]
    UnsupportedForm(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("integration failed: {0}")]
    IntegrationError(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
