//! C ABI for the vbsq toolkit. (implementation follows)
