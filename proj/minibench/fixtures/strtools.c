/* String handling utilities with a small driver. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

enum case_mode { CASE_LOWER, CASE_UPPER, CASE_TITLE };

struct token {
  const char *start;
  int length;
};

struct wordstat {
  int words;
  int lines;
  int chars;
  int longest;
};

int str_length(const char *s) {
  int n = 0;
  while (s[n] != '\0') n++;
  return n;
}

void str_reverse(char *s) {
  int i = 0, j = str_length(s) - 1;
  while (i < j) {
    char t = s[i];
    s[i] = s[j];
    s[j] = t;
    i++;
    j--;
  }
}

int is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

int is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? (char)(c + 32) : c; }

char to_upper(char c) { return (c >= 'a' && c <= 'z') ? (char)(c - 32) : c; }

void convert_case(char *s, enum case_mode mode) {
  int start = 1;
  for (; *s; s++) {
    switch (mode) {
      case CASE_LOWER:
        *s = to_lower(*s);
        break;
      case CASE_UPPER:
        *s = to_upper(*s);
        break;
      case CASE_TITLE:
        *s = start ? to_upper(*s) : to_lower(*s);
        break;
    }
    start = is_space(*s);
  }
}

int is_palindrome(const char *s) {
  int i = 0, j = str_length(s) - 1;
  while (i < j) {
    while (i < j && !is_alpha(s[i])) i++;
    while (i < j && !is_alpha(s[j])) j--;
    if (to_lower(s[i]) != to_lower(s[j])) return 0;
    i++;
    j--;
  }
  return 1;
}

char *trim(char *s) {
  char *end;
  while (is_space(*s)) s++;
  if (*s == '\0') return s;
  end = s + str_length(s) - 1;
  while (end > s && is_space(*end)) end--;
  end[1] = '\0';
  return s;
}

int next_token(const char *s, int pos, struct token *tok) {
  while (s[pos] && is_space(s[pos])) pos++;
  if (!s[pos]) return -1;
  tok->start = s + pos;
  tok->length = 0;
  while (s[pos] && !is_space(s[pos])) {
    pos++;
    tok->length++;
  }
  return pos;
}

struct wordstat count_words(const char *s) {
  struct wordstat st = {0, 0, 0, 0};
  int in_word = 0, cur = 0;
  for (; *s; s++) {
    st.chars++;
    if (*s == '\n') st.lines++;
    if (is_space(*s)) {
      if (in_word && cur > st.longest) st.longest = cur;
      in_word = 0;
      cur = 0;
    } else {
      if (!in_word) st.words++;
      in_word = 1;
      cur++;
    }
  }
  if (in_word && cur > st.longest) st.longest = cur;
  return st;
}

void kmp_table(const char *pat, int *fail, int m) {
  int k = 0;
  fail[0] = 0;
  for (int i = 1; i < m; i++) {
    while (k > 0 && pat[i] != pat[k]) k = fail[k - 1];
    if (pat[i] == pat[k]) k++;
    fail[i] = k;
  }
}

int kmp_search(const char *text, const char *pat) {
  int m = str_length(pat), n = str_length(text), k = 0;
  int *fail;
  if (m == 0) return 0;
  fail = malloc(sizeof(int) * (size_t)m);
  if (!fail) return -1;
  kmp_table(pat, fail, m);
  for (int i = 0; i < n; i++) {
    while (k > 0 && text[i] != pat[k]) k = fail[k - 1];
    if (text[i] == pat[k]) k++;
    if (k == m) {
      free(fail);
      return i - m + 1;
    }
  }
  free(fail);
  return -1;
}

static const char b64chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int base64_encode(const unsigned char *in, int len, char *out) {
  int o = 0;
  for (int i = 0; i < len; i += 3) {
    unsigned v = (unsigned)in[i] << 16;
    if (i + 1 < len) v |= (unsigned)in[i + 1] << 8;
    if (i + 2 < len) v |= in[i + 2];
    out[o++] = b64chars[(v >> 18) & 63];
    out[o++] = b64chars[(v >> 12) & 63];
    out[o++] = i + 1 < len ? b64chars[(v >> 6) & 63] : '=';
    out[o++] = i + 2 < len ? b64chars[v & 63] : '=';
  }
  out[o] = '\0';
  return o;
}

int base64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

int base64_decode(const char *in, unsigned char *out) {
  int o = 0, bits = 0;
  unsigned acc = 0;
  for (; *in && *in != '='; in++) {
    int v = base64_value(*in);
    if (v < 0) return -1;
    acc = (acc << 6) | (unsigned)v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out[o++] = (unsigned char)(acc >> bits);
    }
  }
  return o;
}

int rle_encode(const char *in, char *out) {
  int o = 0;
  while (*in) {
    char c = *in;
    int run = 0;
    while (*in == c && run < 9) {
      in++;
      run++;
    }
    out[o++] = (char)('0' + run);
    out[o++] = c;
  }
  out[o] = '\0';
  return o;
}

int rle_decode(const char *in, char *out) {
  int o = 0;
  while (in[0] && in[1]) {
    int run = in[0] - '0';
    for (int i = 0; i < run; i++) out[o++] = in[1];
    in += 2;
  }
  out[o] = '\0';
  return o;
}

long parse_hex(const char *s) {
  long v = 0;
  if (s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s += 2;
  for (; *s; s++) {
    int d;
    if (*s >= '0' && *s <= '9')
      d = *s - '0';
    else if (*s >= 'a' && *s <= 'f')
      d = *s - 'a' + 10;
    else if (*s >= 'A' && *s <= 'F')
      d = *s - 'A' + 10;
    else
      break;
    v = v * 16 + d;
  }
  return v;
}

int edit_distance(const char *a, const char *b) {
  int n = str_length(a), m = str_length(b);
  int *prev = malloc(sizeof(int) * (size_t)(m + 1));
  int *cur = malloc(sizeof(int) * (size_t)(m + 1));
  int result;
  for (int j = 0; j <= m; j++) prev[j] = j;
  for (int i = 1; i <= n; i++) {
    cur[0] = i;
    for (int j = 1; j <= m; j++) {
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      int best = prev[j] + 1;
      if (cur[j - 1] + 1 < best) best = cur[j - 1] + 1;
      if (prev[j - 1] + cost < best) best = prev[j - 1] + cost;
      cur[j] = best;
    }
    int *t = prev;
    prev = cur;
    cur = t;
  }
  result = prev[m];
  free(prev);
  free(cur);
  return result;
}

unsigned hash_string(const char *s) {
  unsigned h = 2166136261u;
  while (*s) {
    h ^= (unsigned char)*s++;
    h *= 16777619u;
  }
  return h;
}

int count_char(const char *s, char c) {
  int n = 0;
  for (; *s; s++)
    if (*s == c) n++;
  return n;
}

void caesar(char *s, int shift) {
  for (; *s; s++) {
    if (*s >= 'a' && *s <= 'z')
      *s = (char)('a' + (*s - 'a' + shift + 26) % 26);
    else if (*s >= 'A' && *s <= 'Z')
      *s = (char)('A' + (*s - 'A' + shift + 26) % 26);
  }
}

int compare_words(const void *a, const void *b) {
  return strcmp(*(const char *const *)a, *(const char *const *)b);
}

int sort_words(char *text, char **words, int max) {
  int n = 0;
  char *p = strtok(text, " \t\n");
  while (p && n < max) {
    words[n++] = p;
    p = strtok(NULL, " \t\n");
  }
  qsort(words, (size_t)n, sizeof(char *), compare_words);
  return n;
}

short checksum16(const char *s) {
  unsigned short sum = 0;
  while (*s) sum = (unsigned short)((sum << 1 | sum >> 15) + (unsigned char)*s++);
  return (short)sum;
}

int main(int argc, char **argv) {
  char buf[256], out[512];
  unsigned char raw[256];
  char *words[32];
  struct token tok;
  struct wordstat st;
  const char *text = argc > 1 ? argv[1] : "A man a plan a canal Panama";
  int pos = 0;

  strncpy(buf, text, sizeof buf - 1);
  buf[sizeof buf - 1] = '\0';
  printf("palindrome=%d\n", is_palindrome(buf));
  st = count_words(buf);
  printf("words=%d longest=%d\n", st.words, st.longest);
  while ((pos = next_token(buf, pos, &tok)) >= 0) printf("[%.*s]", tok.length, tok.start);
  printf("\n");
  convert_case(buf, (enum case_mode)(argc % 3));
  str_reverse(buf);
  printf("%s\n", trim(buf));
  base64_encode((const unsigned char *)text, str_length(text), out);
  printf("%s %d\n", out, base64_decode(out, raw));
  rle_encode("aaabbbcccd", out);
  rle_decode(out, buf);
  printf("%s %ld %d\n", buf, parse_hex(argc > 2 ? argv[2] : "0x1f"), kmp_search(text, "plan"));
  printf("%d %u %d %d\n", edit_distance(text, "kitten"), hash_string(text), count_char(text, 'a'),
         checksum16(text));
  strncpy(buf, text, sizeof buf - 1);
  caesar(buf, 3);
  printf("%d\n", sort_words(buf, words, 32));
  return 0;
}
