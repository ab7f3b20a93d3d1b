fn main() {
    // dense symmetric eigensolver and Cholesky solves go through the system
    // reference LAPACK/BLAS (single-threaded, run-to-run deterministic)
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
