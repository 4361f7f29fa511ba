pub mod poly;
pub mod specfun;
pub mod qalg;
pub mod unirrep;
pub mod models;
pub mod verify;
