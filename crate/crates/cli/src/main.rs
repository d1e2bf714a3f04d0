fn main() {
    gkm_cycle_cli::main_exit()
}
