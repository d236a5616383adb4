pub mod error;
pub mod mat2;
pub mod padic;
pub mod quadspace;
pub mod tree;
pub mod double_coset;
pub mod matching;
pub mod oracle;
pub mod weil;
