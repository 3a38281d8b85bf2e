#include <stdio.h>

struct item {
  char *label;
  int weight;
};

enum tone { LOW, HIGH };

int add_scaled(char c, int k) {
  return c * 3 + k;
}

void nothing(void) {
}

char *first_label(struct item *it) {
  return it->label;
}

float blend(struct item it, enum tone t) {
  return t == HIGH ? (float)it.weight : 0.5f;
}

static int square(int x) { return x * x; }

int main(int argc, char **argv) {
  struct item it = {argv[0], argc};
  nothing();
  printf("%d %d %s %f\n", add_scaled('a', argc), square(argc), first_label(&it), blend(it, HIGH));
  return 0;
}
