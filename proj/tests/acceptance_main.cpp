#include <cstdio>
int main(int argc, char** argv) { (void)argc; (void)argv; std::puts("TODO"); return 0; }
