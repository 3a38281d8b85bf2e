/* Grid puzzles, bit tricks, checksums and 8-bit image filters. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#define W 16
#define H 16

enum cell { DEAD = 0, ALIVE = 1 };

enum direction { NORTH, EAST, SOUTH, WEST };

struct point {
  short x;
  short y;
};

struct image {
  unsigned char px[H][W];
};

int count_neighbors(const unsigned char g[H][W], int y, int x) {
  int n = 0;
  for (int dy = -1; dy <= 1; dy++)
    for (int dx = -1; dx <= 1; dx++) {
      if (!dy && !dx) continue;
      int yy = (y + dy + H) % H, xx = (x + dx + W) % W;
      n += g[yy][xx];
    }
  return n;
}

void life_step(const unsigned char in[H][W], unsigned char out[H][W]) {
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) {
      int n = count_neighbors(in, y, x);
      out[y][x] = (unsigned char)(in[y][x] ? (n == 2 || n == 3) : n == 3);
    }
}

int population(const unsigned char g[H][W]) {
  int n = 0;
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) n += g[y][x] == ALIVE;
  return n;
}

int flood_fill(unsigned char g[H][W], int y, int x, unsigned char from, unsigned char to) {
  if (y < 0 || y >= H || x < 0 || x >= W || g[y][x] != from) return 0;
  g[y][x] = to;
  return 1 + flood_fill(g, y + 1, x, from, to) + flood_fill(g, y - 1, x, from, to) +
         flood_fill(g, y, x + 1, from, to) + flood_fill(g, y, x - 1, from, to);
}

struct point step(struct point p, enum direction d) {
  switch (d) {
    case NORTH: p.y--; break;
    case EAST: p.x++; break;
    case SOUTH: p.y++; break;
    case WEST: p.x--; break;
  }
  return p;
}

int bfs_maze(const unsigned char g[H][W], struct point from, struct point to) {
  static struct point queue[W * H];
  static short dist[H][W];
  int head = 0, tail = 0;
  memset(dist, -1, sizeof dist);
  dist[from.y][from.x] = 0;
  queue[tail++] = from;
  while (head < tail) {
    struct point p = queue[head++];
    if (p.x == to.x && p.y == to.y) return dist[p.y][p.x];
    for (int d = NORTH; d <= WEST; d++) {
      struct point q = step(p, (enum direction)d);
      if (q.x < 0 || q.y < 0 || q.x >= W || q.y >= H) continue;
      if (g[q.y][q.x] || dist[q.y][q.x] >= 0) continue;
      dist[q.y][q.x] = (short)(dist[p.y][p.x] + 1);
      queue[tail++] = q;
    }
  }
  return -1;
}

int queens_safe(const int *cols, int row, int col) {
  for (int r = 0; r < row; r++) {
    int c = cols[r];
    if (c == col || c - col == r - row || c - col == row - r) return 0;
  }
  return 1;
}

int queens(int *cols, int row, int n) {
  int count = 0;
  if (row == n) return 1;
  for (int c = 0; c < n; c++) {
    if (!queens_safe(cols, row, c)) continue;
    cols[row] = c;
    count += queens(cols, row + 1, n);
  }
  return count;
}

int sudoku_ok(const char b[81], int pos, char v) {
  int r = pos / 9, c = pos % 9, br = r / 3 * 3, bc = c / 3 * 3;
  for (int i = 0; i < 9; i++) {
    if (b[r * 9 + i] == v || b[i * 9 + c] == v) return 0;
    if (b[(br + i / 3) * 9 + bc + i % 3] == v) return 0;
  }
  return 1;
}

int sudoku_solve(char b[81], int pos) {
  while (pos < 81 && b[pos]) pos++;
  if (pos == 81) return 1;
  for (char v = 1; v <= 9; v++) {
    if (!sudoku_ok(b, pos, v)) continue;
    b[pos] = v;
    if (sudoku_solve(b, pos + 1)) return 1;
  }
  b[pos] = 0;
  return 0;
}

unsigned crc32_update(unsigned crc, const unsigned char *data, int len) {
  crc = ~crc;
  for (int i = 0; i < len; i++) {
    crc ^= data[i];
    for (int k = 0; k < 8; k++) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

unsigned adler32(const unsigned char *data, int len) {
  unsigned a = 1, b = 0;
  for (int i = 0; i < len; i++) {
    a = (a + data[i]) % 65521u;
    b = (b + a) % 65521u;
  }
  return (b << 16) | a;
}

int popcount32(unsigned v) {
  int n = 0;
  while (v) {
    v &= v - 1;
    n++;
  }
  return n;
}

unsigned reverse_bits(unsigned v) {
  unsigned r = 0;
  for (int i = 0; i < 32; i++) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

unsigned rotl32(unsigned v, int s) { return (v << (s & 31)) | (v >> ((32 - s) & 31)); }

unsigned short byteswap16(unsigned short v) { return (unsigned short)((v << 8) | (v >> 8)); }

char parity(unsigned v) {
  v ^= v >> 16;
  v ^= v >> 8;
  v ^= v >> 4;
  v ^= v >> 2;
  v ^= v >> 1;
  return (char)(v & 1u);
}

void blur(const struct image *in, struct image *out) {
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) {
      int sum = 0, n = 0;
      for (int dy = -1; dy <= 1; dy++)
        for (int dx = -1; dx <= 1; dx++) {
          int yy = y + dy, xx = x + dx;
          if (yy < 0 || xx < 0 || yy >= H || xx >= W) continue;
          sum += in->px[yy][xx];
          n++;
        }
      out->px[y][x] = (unsigned char)(sum / n);
    }
}

void dither(struct image *img) {
  float err[H][W];
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) err[y][x] = img->px[y][x];
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) {
      float old = err[y][x], nv = old < 128.0f ? 0.0f : 255.0f, e = old - nv;
      img->px[y][x] = (unsigned char)nv;
      if (x + 1 < W) err[y][x + 1] += e * 7.0f / 16.0f;
      if (y + 1 < H && x > 0) err[y + 1][x - 1] += e * 3.0f / 16.0f;
      if (y + 1 < H) err[y + 1][x] += e * 5.0f / 16.0f;
      if (y + 1 < H && x + 1 < W) err[y + 1][x + 1] += e * 1.0f / 16.0f;
    }
}

unsigned char histogram_peak(const struct image *img) {
  int hist[256] = {0}, best = 0;
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) hist[img->px[y][x]]++;
  for (int i = 1; i < 256; i++)
    if (hist[i] > hist[best]) best = i;
  return (unsigned char)best;
}

float brightness(const struct image *img) {
  float sum = 0.0f;
  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) sum += img->px[y][x];
  return sum / (W * H);
}

int main(int argc, char **argv) {
  static unsigned char a[H][W], b[H][W];
  static struct image img, out;
  char board[81] = {5, 3, 0, 0, 7, 0, 0, 0, 0, 6, 0, 0, 1, 9, 5, 0, 0, 0, 0, 9, 8, 0, 0, 0, 0, 6, 0,
                    8, 0, 0, 0, 6, 0, 0, 0, 3, 4, 0, 0, 8, 0, 3, 0, 0, 1, 7, 0, 0, 0, 2, 0, 0, 0, 6,
                    0, 6, 0, 0, 0, 0, 2, 8, 0, 0, 0, 0, 4, 1, 9, 0, 0, 5, 0, 0, 0, 0, 8, 0, 0, 7, 9};
  int cols[10];
  int seed = argc > 1 ? atoi(argv[1]) : 7;
  struct point from = {0, 0}, to = {W - 1, H - 1};

  for (int y = 0; y < H; y++)
    for (int x = 0; x < W; x++) {
      a[y][x] = (unsigned char)(((x * 7 + y * 13 + seed) % 5) == 0);
      img.px[y][x] = (unsigned char)((x * 16 + y * seed) & 255);
    }
  for (int i = 0; i < 4; i++) {
    life_step(a, b);
    life_step(b, a);
  }
  printf("pop=%d maze=%d\n", population(a), bfs_maze(a, from, to));
  printf("fill=%d\n", flood_fill(a, 0, 0, a[0][0], 2));
  printf("queens=%d sudoku=%d\n", queens(cols, 0, argc > 2 ? 8 : 6), sudoku_solve(board, 0));
  blur(&img, &out);
  dither(&out);
  printf("%08x %08x\n", crc32_update(0, &img.px[0][0], W * H), adler32(&img.px[0][0], W * H));
  printf("%d %08x %08x %04x %d\n", popcount32((unsigned)seed), reverse_bits((unsigned)seed),
         rotl32(0x12345678u, seed), byteswap16((unsigned short)seed), parity((unsigned)seed));
  printf("%d %f\n", histogram_peak(&out), brightness(&img));
  return 0;
}
