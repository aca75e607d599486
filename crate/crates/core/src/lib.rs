//! Bounded-polymorphic endpoint types for copyless message passing: type
//! algebra, process type checking and a monitored interpreter.

mod par;
pub mod runtime;
pub mod surface;
pub mod syntax;
pub mod typecheck;
pub mod types;
