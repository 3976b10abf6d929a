//! Name tokens: taxa at the leaves and colors on interior vertices.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A token did not match `[A-Za-z0-9_.-]+`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid token {0:?}: expected [A-Za-z0-9_.-]+")]
pub struct BadToken(pub String);

fn is_token_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

/// True if `s` is a non-empty token over `[A-Za-z0-9_.-]`.
pub fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_token_char)
}

pub(crate) fn token_char(c: char) -> bool {
    is_token_char(c)
}

macro_rules! token_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self, BadToken> {
                let s = s.into();
                if is_token(&s) {
                    Ok(Self(s))
                } else {
                    Err(BadToken(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = BadToken;
            fn from_str(s: &str) -> Result<Self, BadToken> {
                Self::new(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

token_type!(
    /// A leaf name. Ordered by byte order of the token.
    Taxon
);

token_type!(
    /// An opaque interior-vertex color (an element of the dating alphabet).
    Color
);

/// Joins taxa with `,` in the given order.
pub fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for (i, t) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&t.to_string());
    }
    out
}
