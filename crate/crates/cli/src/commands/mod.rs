pub mod behavior;
pub mod chsh;
pub mod selfdual;
pub mod swap;
pub mod vertices;
