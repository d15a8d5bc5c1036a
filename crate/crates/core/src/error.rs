use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants are deliberately coarse: the CLI maps them onto its exit-code
/// contract (malformed input, property violation, resource cap).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input that does not describe a valid object (bad lengths, out-of-range
    /// entries, unparsable text, mismatched kinds or widths).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// An enumeration or search would exceed its configured limit.
    #[error("resource cap exceeded: {what} needs {requested}, limit is {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// A property that is supposed to hold was found to fail. The message
    /// carries the witness.
    #[error("property violation: {0}")]
    Violation(String),

    /// An embedding that should extend to a group element does not.
    #[error("no group element extends the embedding {0}")]
    NoExtension(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Malformed(msg.into()))
}

pub(crate) fn check_cap(what: &'static str, requested: u128, limit: u128) -> Result<()> {
    if requested > limit {
        Err(Error::CapExceeded {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}
