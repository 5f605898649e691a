pub mod constants;
pub mod exact;
pub mod flow;
pub mod ode;
pub mod verify;
