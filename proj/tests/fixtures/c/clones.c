/* gcc -O2 moves the unlikely branch of `check` into a separate check.cold symbol. */
#include <stdio.h>
#include <stdlib.h>
int check(int *v, int n) {
  if (__builtin_expect(v == 0, 0)) {
    fprintf(stderr, "null vector of %d\n", n);
    for (int i = 0; i < n; i++) fprintf(stderr, "%d\n", i);
    abort();
  }
  return v[0] + n;
}
int main(int argc, char **argv) { (void)argv; int v[2]={argc,2}; printf("%d\n", check(argc>5?0:v, argc)); return 0; }
