class /*C %name% */ A {
    public String toString() {
        Printer.write( /*C " %name% " */ "A" );
        Printer.write("escaped \" quote and \\ backslash");
    }
}
