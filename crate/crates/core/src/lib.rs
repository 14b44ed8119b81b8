pub mod almost;
pub mod closure;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod oracle;
pub mod pattern;
pub mod point;
pub mod suite;
mod text;
pub mod topology;
pub mod witness;
