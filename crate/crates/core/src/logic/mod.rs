//! Symbolic representation: literals, cubes, worlds.

mod cube;
mod table;
mod term;
mod world;

pub use cube::{reduce, Cube, CubeDisplay};
pub use table::{CubeId, CubeTable};
pub use term::{
    ArrayId, ConstId, Constructor, EnumType, GlobalId, Literal, LiteralDisplay, Polarity,
    Signature, Sort, Term, TermDisplay, TypeId, VarDecl, BOOL, FALSE, TRUE,
};
pub use world::{Base, World, WorldDisplay};
