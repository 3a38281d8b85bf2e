/* Linked lists, trees, hash tables, heaps and sorting. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

struct node {
  int value;
  struct node *next;
};

struct tree {
  int key;
  struct tree *left;
  struct tree *right;
};

struct entry {
  char key[32];
  int value;
  struct entry *next;
};

struct table {
  struct entry *buckets[64];
  int size;
};

struct heap {
  int data[256];
  int count;
};

struct ring {
  int data[16];
  unsigned head;
  unsigned tail;
};

struct node *list_push(struct node *head, int value) {
  struct node *n = malloc(sizeof *n);
  n->value = value;
  n->next = head;
  return n;
}

struct node *list_reverse(struct node *head) {
  struct node *prev = NULL;
  while (head) {
    struct node *next = head->next;
    head->next = prev;
    prev = head;
    head = next;
  }
  return prev;
}

int list_length(const struct node *head) {
  int n = 0;
  for (; head; head = head->next) n++;
  return n;
}

int list_sum(const struct node *head) { return head ? head->value + list_sum(head->next) : 0; }

void list_free(struct node *head) {
  while (head) {
    struct node *next = head->next;
    free(head);
    head = next;
  }
}

struct tree *tree_insert(struct tree *t, int key) {
  if (!t) {
    t = calloc(1, sizeof *t);
    t->key = key;
    return t;
  }
  if (key < t->key)
    t->left = tree_insert(t->left, key);
  else if (key > t->key)
    t->right = tree_insert(t->right, key);
  return t;
}

struct tree *tree_min(struct tree *t) {
  while (t && t->left) t = t->left;
  return t;
}

struct tree *tree_delete(struct tree *t, int key) {
  if (!t) return NULL;
  if (key < t->key) {
    t->left = tree_delete(t->left, key);
  } else if (key > t->key) {
    t->right = tree_delete(t->right, key);
  } else {
    struct tree *child;
    if (!t->left || !t->right) {
      child = t->left ? t->left : t->right;
      free(t);
      return child;
    }
    child = tree_min(t->right);
    t->key = child->key;
    t->right = tree_delete(t->right, child->key);
  }
  return t;
}

int tree_height(const struct tree *t) {
  int l, r;
  if (!t) return 0;
  l = tree_height(t->left);
  r = tree_height(t->right);
  return 1 + (l > r ? l : r);
}

void tree_inorder(const struct tree *t, int *out, int *n) {
  if (!t) return;
  tree_inorder(t->left, out, n);
  out[(*n)++] = t->key;
  tree_inorder(t->right, out, n);
}

void tree_free(struct tree *t) {
  if (!t) return;
  tree_free(t->left);
  tree_free(t->right);
  free(t);
}

unsigned table_hash(const char *key) {
  unsigned h = 5381;
  while (*key) h = h * 33 + (unsigned char)*key++;
  return h & 63;
}

void table_put(struct table *t, const char *key, int value) {
  unsigned h = table_hash(key);
  struct entry *e;
  for (e = t->buckets[h]; e; e = e->next)
    if (strcmp(e->key, key) == 0) {
      e->value = value;
      return;
    }
  e = malloc(sizeof *e);
  strncpy(e->key, key, sizeof e->key - 1);
  e->key[sizeof e->key - 1] = '\0';
  e->value = value;
  e->next = t->buckets[h];
  t->buckets[h] = e;
  t->size++;
}

int table_get(const struct table *t, const char *key, int *value) {
  const struct entry *e;
  for (e = t->buckets[table_hash(key)]; e; e = e->next)
    if (strcmp(e->key, key) == 0) {
      *value = e->value;
      return 1;
    }
  return 0;
}

void table_clear(struct table *t) {
  for (int i = 0; i < 64; i++) {
    struct entry *e = t->buckets[i];
    while (e) {
      struct entry *next = e->next;
      free(e);
      e = next;
    }
    t->buckets[i] = NULL;
  }
  t->size = 0;
}

void heap_push(struct heap *h, int v) {
  int i = h->count++;
  h->data[i] = v;
  while (i > 0) {
    int p = (i - 1) / 2;
    if (h->data[p] <= h->data[i]) break;
    int t = h->data[p];
    h->data[p] = h->data[i];
    h->data[i] = t;
    i = p;
  }
}

int heap_pop(struct heap *h) {
  int top = h->data[0], i = 0;
  h->data[0] = h->data[--h->count];
  for (;;) {
    int l = 2 * i + 1, r = l + 1, m = i;
    if (l < h->count && h->data[l] < h->data[m]) m = l;
    if (r < h->count && h->data[r] < h->data[m]) m = r;
    if (m == i) break;
    int t = h->data[m];
    h->data[m] = h->data[i];
    h->data[i] = t;
    i = m;
  }
  return top;
}

int ring_put(struct ring *r, int v) {
  if (r->head - r->tail == 16) return 0;
  r->data[r->head++ & 15] = v;
  return 1;
}

int ring_get(struct ring *r, int *v) {
  if (r->head == r->tail) return 0;
  *v = r->data[r->tail++ & 15];
  return 1;
}

void swap_int(int *a, int *b) {
  int t = *a;
  *a = *b;
  *b = t;
}

void insertion_sort(int *v, int n) {
  for (int i = 1; i < n; i++) {
    int x = v[i], j = i - 1;
    while (j >= 0 && v[j] > x) {
      v[j + 1] = v[j];
      j--;
    }
    v[j + 1] = x;
  }
}

void quick_sort(int *v, int lo, int hi) {
  if (lo >= hi) return;
  int pivot = v[(lo + hi) / 2], i = lo, j = hi;
  while (i <= j) {
    while (v[i] < pivot) i++;
    while (v[j] > pivot) j--;
    if (i <= j) swap_int(&v[i++], &v[j--]);
  }
  quick_sort(v, lo, j);
  quick_sort(v, i, hi);
}

void merge_sort(int *v, int *tmp, int n) {
  if (n < 2) return;
  int mid = n / 2, i = 0, j = mid, k = 0;
  merge_sort(v, tmp, mid);
  merge_sort(v + mid, tmp, n - mid);
  while (i < mid && j < n) tmp[k++] = v[i] <= v[j] ? v[i++] : v[j++];
  while (i < mid) tmp[k++] = v[i++];
  while (j < n) tmp[k++] = v[j++];
  memcpy(v, tmp, sizeof(int) * (size_t)n);
}

void shell_sort(int *v, int n) {
  for (int gap = n / 2; gap > 0; gap /= 2)
    for (int i = gap; i < n; i++)
      for (int j = i - gap; j >= 0 && v[j] > v[j + gap]; j -= gap) swap_int(&v[j], &v[j + gap]);
}

int binary_search(const int *v, int n, int key) {
  int lo = 0, hi = n - 1;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    if (v[mid] == key) return mid;
    if (v[mid] < key)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

int is_sorted(const int *v, int n) {
  for (int i = 1; i < n; i++)
    if (v[i - 1] > v[i]) return 0;
  return 1;
}

unsigned lcg_next(unsigned *state) {
  *state = *state * 1103515245u + 12345u;
  return (*state >> 16) & 0x7fff;
}

int main(int argc, char **argv) {
  static struct table table;
  struct heap heap = {{0}, 0};
  struct ring ring = {{0}, 0, 0};
  struct node *list = NULL;
  struct tree *tree = NULL;
  int v[64], tmp[64], order[64], n = 0, value = 0;
  unsigned seed = argc > 1 ? (unsigned)atoi(argv[1]) : 42u;

  for (int i = 0; i < 64; i++) {
    v[i] = (int)lcg_next(&seed) % 1000;
    list = list_push(list, v[i]);
    tree = tree_insert(tree, v[i]);
    heap_push(&heap, v[i]);
    ring_put(&ring, v[i]);
  }
  list = list_reverse(list);
  printf("%d %d %d\n", list_length(list), list_sum(list), tree_height(tree));
  tree = tree_delete(tree, v[3]);
  tree_inorder(tree, order, &n);
  printf("%d %d\n", n, is_sorted(order, n));
  table_put(&table, "alpha", 1);
  table_put(&table, "beta", 2);
  table_put(&table, argc > 2 ? argv[2] : "gamma", 3);
  printf("%d %d\n", table_get(&table, "beta", &value), value);
  table_clear(&table);
  printf("%d %d\n", heap_pop(&heap), heap_pop(&heap));
  while (ring_get(&ring, &value)) n += value;
  switch (argc % 4) {
    case 0: insertion_sort(v, 64); break;
    case 1: quick_sort(v, 0, 63); break;
    case 2: merge_sort(v, tmp, 64); break;
    default: shell_sort(v, 64); break;
  }
  printf("%d %d %d\n", is_sorted(v, 64), binary_search(v, 64, v[10]), n);
  list_free(list);
  tree_free(tree);
  return 0;
}
