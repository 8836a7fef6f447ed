// Exits 0 when dgees reproduces a 200 x 200 matrix to working accuracy.
#include <lapacke.h>
#include <math.h>
#include <stdlib.h>

int main(void) {
  const int n = 200;
  double *a = malloc(sizeof(double) * n * n), *t = malloc(sizeof(double) * n * n);
  double *z = malloc(sizeof(double) * n * n), *wr = malloc(sizeof(double) * n), *wi = malloc(sizeof(double) * n);
  unsigned s = 12345u;
  for (int i = 0; i < n * n; ++i) {
    s = s * 1103515245u + 12345u;
    a[i] = t[i] = (double)(s >> 8) / 16777216.0 - 0.5;
  }
  lapack_int sdim = 0;
  if (LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', NULL, n, t, n, &sdim, wr, wi, z, n) != 0) return 1;
  double err = 0.0, norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) v += z[i + k * n] * t[k + l * n] * z[j + l * n];
      err += (v - a[i + j * n]) * (v - a[i + j * n]);
      norm += a[i + j * n] * a[i + j * n];
    }
  return sqrt(err / norm) < 1e-10 ? 0 : 2;
}
