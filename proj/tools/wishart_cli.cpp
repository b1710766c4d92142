// placeholder so the build graph is complete while the library grows
int main() { return 0; }
