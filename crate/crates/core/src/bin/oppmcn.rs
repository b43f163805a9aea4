fn main() {
    std::process::exit(oppmcn::cli::main());
}
