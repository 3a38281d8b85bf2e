/* Numerical routines over doubles and integers. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#define N 4

struct complex {
  double re;
  double im;
};

struct stats {
  double mean;
  double variance;
  double min;
  double max;
};

enum rule { RULE_TRAPEZOID, RULE_SIMPSON, RULE_MIDPOINT };

double newton_sqrt(double x) {
  double g = x > 1.0 ? x / 2.0 : 1.0;
  if (x <= 0.0) return 0.0;
  for (int i = 0; i < 40; i++) {
    double next = 0.5 * (g + x / g);
    if (fabs(next - g) < 1e-12) break;
    g = next;
  }
  return g;
}

double poly_eval(const double *coef, int degree, double x) {
  double r = coef[degree];
  for (int i = degree - 1; i >= 0; i--) r = r * x + coef[i];
  return r;
}

void mat_mul(double a[N][N], double b[N][N], double c[N][N]) {
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) {
      double s = 0.0;
      for (int k = 0; k < N; k++) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
}

double determinant(double m[N][N]) {
  double a[N][N], det = 1.0;
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) a[i][j] = m[i][j];
  for (int c = 0; c < N; c++) {
    int p = c;
    for (int r = c + 1; r < N; r++)
      if (fabs(a[r][c]) > fabs(a[p][c])) p = r;
    if (fabs(a[p][c]) < 1e-15) return 0.0;
    if (p != c) {
      for (int k = 0; k < N; k++) {
        double t = a[c][k];
        a[c][k] = a[p][k];
        a[p][k] = t;
      }
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; r++) {
      double f = a[r][c] / a[c][c];
      for (int k = c; k < N; k++) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

int gauss_solve(double a[N][N], double *b, double *x) {
  for (int c = 0; c < N; c++) {
    int p = c;
    for (int r = c + 1; r < N; r++)
      if (fabs(a[r][c]) > fabs(a[p][c])) p = r;
    if (fabs(a[p][c]) < 1e-15) return -1;
    for (int k = 0; k < N; k++) {
      double t = a[c][k];
      a[c][k] = a[p][k];
      a[p][k] = t;
    }
    double t = b[c];
    b[c] = b[p];
    b[p] = t;
    for (int r = c + 1; r < N; r++) {
      double f = a[r][c] / a[c][c];
      for (int k = c; k < N; k++) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = N - 1; r >= 0; r--) {
    double s = b[r];
    for (int k = r + 1; k < N; k++) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return 0;
}

struct stats compute_stats(const double *v, int n) {
  struct stats s = {0.0, 0.0, v[0], v[0]};
  for (int i = 0; i < n; i++) {
    s.mean += v[i];
    if (v[i] < s.min) s.min = v[i];
    if (v[i] > s.max) s.max = v[i];
  }
  s.mean /= n;
  for (int i = 0; i < n; i++) s.variance += (v[i] - s.mean) * (v[i] - s.mean);
  s.variance /= n;
  return s;
}

double integrand(double x) { return sin(x) * exp(-x / 4.0); }

double integrate(double (*f)(double), double a, double b, int steps, enum rule rule) {
  double h = (b - a) / steps, sum = 0.0;
  switch (rule) {
    case RULE_TRAPEZOID:
      sum = 0.5 * (f(a) + f(b));
      for (int i = 1; i < steps; i++) sum += f(a + i * h);
      return sum * h;
    case RULE_SIMPSON:
      sum = f(a) + f(b);
      for (int i = 1; i < steps; i++) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
      return sum * h / 3.0;
    case RULE_MIDPOINT:
      for (int i = 0; i < steps; i++) sum += f(a + (i + 0.5) * h);
      return sum * h;
  }
  return 0.0;
}

struct complex c_mul(struct complex a, struct complex b) {
  struct complex r = {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  return r;
}

struct complex c_add(struct complex a, struct complex b) {
  struct complex r = {a.re + b.re, a.im + b.im};
  return r;
}

int mandelbrot(struct complex c, int limit) {
  struct complex z = {0.0, 0.0};
  for (int i = 0; i < limit; i++) {
    z = c_add(c_mul(z, z), c);
    if (z.re * z.re + z.im * z.im > 4.0) return i;
  }
  return limit;
}

void dft(const double *in, struct complex *out, int n) {
  for (int k = 0; k < n; k++) {
    out[k].re = 0.0;
    out[k].im = 0.0;
    for (int t = 0; t < n; t++) {
      double ang = -2.0 * M_PI * t * k / n;
      out[k].re += in[t] * cos(ang);
      out[k].im += in[t] * sin(ang);
    }
  }
}

double sine_series(double x, int terms) {
  double term = x, sum = x;
  for (int i = 1; i < terms; i++) {
    term *= -x * x / ((2 * i) * (2 * i + 1));
    sum += term;
  }
  return sum;
}

long gcd(long a, long b) {
  while (b != 0) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

long lcm(long a, long b) { return a / gcd(a, b) * b; }

int sieve(int limit, int *primes) {
  char *composite = calloc((size_t)limit + 1, 1);
  int count = 0;
  for (int i = 2; i <= limit; i++) {
    if (composite[i]) continue;
    primes[count++] = i;
    for (long j = (long)i * i; j <= limit; j += i) composite[j] = 1;
  }
  free(composite);
  return count;
}

long fib_recursive(int n) { return n < 2 ? n : fib_recursive(n - 1) + fib_recursive(n - 2); }

long fib_iterative(int n) {
  long a = 0, b = 1;
  for (int i = 0; i < n; i++) {
    long t = a + b;
    a = b;
    b = t;
  }
  return a;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

unsigned long pow_mod(unsigned long base, unsigned long exp, unsigned long mod) {
  unsigned long r = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

float lerp(float a, float b, float t) { return a + (b - a) * t; }

float clampf(float v, float lo, float hi) { return v < lo ? lo : (v > hi ? hi : v); }

double bisect_root(double (*f)(double), double lo, double hi) {
  for (int i = 0; i < 100; i++) {
    double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double cubic(double x) { return x * x * x - 2.0 * x - 5.0; }

int collatz_length(long n) {
  int steps = 0;
  while (n != 1) {
    n = (n % 2) ? 3 * n + 1 : n / 2;
    steps++;
  }
  return steps;
}

int main(int argc, char **argv) {
  double a[N][N], b[N][N], c[N][N], rhs[N], x[N], samples[16];
  double coef[4] = {1.0, -3.0, 0.5, 2.0};
  struct complex spec[16];
  int primes[128];
  int n = argc > 1 ? atoi(argv[1]) : 20;
  struct stats st;
  struct complex pt = {-0.5, 0.5};

  for (int i = 0; i < N; i++) {
    rhs[i] = i + 1;
    for (int j = 0; j < N; j++) {
      a[i][j] = (i == j) ? 4.0 : 1.0 / (i + j + 1);
      b[i][j] = i - j;
    }
  }
  mat_mul(a, b, c);
  printf("det=%f\n", determinant(a));
  gauss_solve(a, rhs, x);
  for (int i = 0; i < 16; i++) samples[i] = sin(i * 0.3) + newton_sqrt(i);
  st = compute_stats(samples, 16);
  dft(samples, spec, 16);
  printf("%f %f %f %f\n", st.mean, st.variance, spec[1].re, x[0]);
  printf("%f %f\n", integrate(integrand, 0.0, 10.0, 100, (enum rule)(argc % 3)),
         poly_eval(coef, 3, 1.5));
  printf("%d %f %ld %ld\n", mandelbrot(pt, 200), sine_series(1.0, 10), gcd(n * 6, 84), lcm(n, 15));
  printf("%d %ld %ld %ld\n", sieve(500, primes), fib_recursive(n), fib_iterative(n), factorial(n % 15));
  printf("%lu %f %f\n", pow_mod(7, (unsigned long)n, 1000000007ul), lerp(0.0f, 10.0f, 0.25f),
         clampf((float)n, 0.0f, 5.0f));
  printf("%f %d\n", bisect_root(cubic, 2.0, 3.0), collatz_length(n + 7));
  return 0;
}
