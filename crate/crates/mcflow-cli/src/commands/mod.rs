pub mod bonnesen;
pub mod entropy;
pub mod flow;
pub mod generate;
pub mod rigidity;
pub mod verify;
