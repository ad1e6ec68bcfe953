fn main() {
    // LAPACK backend for the dense eigensolver; OpenBLAS ships the full
    // LAPACK symbol set on this platform.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
