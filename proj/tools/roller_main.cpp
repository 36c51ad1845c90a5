#include <cstdio>
int main() { std::puts("roller"); return 0; }
