/* A lexer, parser and stack-machine interpreter for integer expressions. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

enum opcode { OP_PUSH, OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_MOD, OP_NEG, OP_DUP, OP_SWAP,
              OP_JMP, OP_JZ, OP_LT, OP_EQ, OP_PRINT, OP_HALT, OP_LOAD, OP_STORE };

enum token_kind { TK_NUM, TK_PLUS, TK_MINUS, TK_STAR, TK_SLASH, TK_PERCENT, TK_LPAREN,
                  TK_RPAREN, TK_IDENT, TK_END, TK_ERROR };

enum vm_status { VM_OK, VM_STACK_UNDERFLOW, VM_STACK_OVERFLOW, VM_DIV_ZERO, VM_BAD_OP };

struct lexer {
  const char *src;
  int pos;
  enum token_kind kind;
  long number;
  char ident;
};

struct instr {
  enum opcode op;
  long arg;
};

struct program {
  struct instr code[256];
  int length;
};

struct vm {
  long stack[64];
  int sp;
  long vars[26];
  int steps;
};

int is_digit(char c) { return c >= '0' && c <= '9'; }

enum token_kind lex_next(struct lexer *lx) {
  char c;
  while (lx->src[lx->pos] == ' ') lx->pos++;
  c = lx->src[lx->pos];
  if (c == '\0') return lx->kind = TK_END;
  if (is_digit(c)) {
    lx->number = 0;
    while (is_digit(lx->src[lx->pos])) lx->number = lx->number * 10 + (lx->src[lx->pos++] - '0');
    return lx->kind = TK_NUM;
  }
  lx->pos++;
  switch (c) {
    case '+': return lx->kind = TK_PLUS;
    case '-': return lx->kind = TK_MINUS;
    case '*': return lx->kind = TK_STAR;
    case '/': return lx->kind = TK_SLASH;
    case '%': return lx->kind = TK_PERCENT;
    case '(': return lx->kind = TK_LPAREN;
    case ')': return lx->kind = TK_RPAREN;
    default:
      if (c >= 'a' && c <= 'z') {
        lx->ident = c;
        return lx->kind = TK_IDENT;
      }
      return lx->kind = TK_ERROR;
  }
}

void emit(struct program *p, enum opcode op, long arg) {
  if (p->length < 256) {
    p->code[p->length].op = op;
    p->code[p->length].arg = arg;
    p->length++;
  }
}

int parse_expr(struct lexer *lx, struct program *p);

int parse_primary(struct lexer *lx, struct program *p) {
  switch (lx->kind) {
    case TK_NUM:
      emit(p, OP_PUSH, lx->number);
      lex_next(lx);
      return 0;
    case TK_IDENT:
      emit(p, OP_LOAD, lx->ident - 'a');
      lex_next(lx);
      return 0;
    case TK_MINUS:
      lex_next(lx);
      if (parse_primary(lx, p)) return -1;
      emit(p, OP_NEG, 0);
      return 0;
    case TK_LPAREN:
      lex_next(lx);
      if (parse_expr(lx, p)) return -1;
      if (lx->kind != TK_RPAREN) return -1;
      lex_next(lx);
      return 0;
    default:
      return -1;
  }
}

int parse_term(struct lexer *lx, struct program *p) {
  if (parse_primary(lx, p)) return -1;
  while (lx->kind == TK_STAR || lx->kind == TK_SLASH || lx->kind == TK_PERCENT) {
    enum token_kind k = lx->kind;
    lex_next(lx);
    if (parse_primary(lx, p)) return -1;
    emit(p, k == TK_STAR ? OP_MUL : k == TK_SLASH ? OP_DIV : OP_MOD, 0);
  }
  return 0;
}

int parse_expr(struct lexer *lx, struct program *p) {
  if (parse_term(lx, p)) return -1;
  while (lx->kind == TK_PLUS || lx->kind == TK_MINUS) {
    enum token_kind k = lx->kind;
    lex_next(lx);
    if (parse_term(lx, p)) return -1;
    emit(p, k == TK_PLUS ? OP_ADD : OP_SUB, 0);
  }
  return 0;
}

int compile_expr(const char *src, struct program *p) {
  struct lexer lx = {src, 0, TK_END, 0, 0};
  p->length = 0;
  lex_next(&lx);
  if (parse_expr(&lx, p) || lx.kind != TK_END) return -1;
  emit(p, OP_PRINT, 0);
  emit(p, OP_HALT, 0);
  return p->length;
}

enum vm_status vm_push(struct vm *m, long v) {
  if (m->sp >= 64) return VM_STACK_OVERFLOW;
  m->stack[m->sp++] = v;
  return VM_OK;
}

enum vm_status vm_pop(struct vm *m, long *v) {
  if (m->sp <= 0) return VM_STACK_UNDERFLOW;
  *v = m->stack[--m->sp];
  return VM_OK;
}

enum vm_status vm_binary(struct vm *m, enum opcode op) {
  long a, b, r = 0;
  if (vm_pop(m, &b) || vm_pop(m, &a)) return VM_STACK_UNDERFLOW;
  switch (op) {
    case OP_ADD: r = a + b; break;
    case OP_SUB: r = a - b; break;
    case OP_MUL: r = a * b; break;
    case OP_DIV:
      if (b == 0) return VM_DIV_ZERO;
      r = a / b;
      break;
    case OP_MOD:
      if (b == 0) return VM_DIV_ZERO;
      r = a % b;
      break;
    case OP_LT: r = a < b; break;
    case OP_EQ: r = a == b; break;
    default: return VM_BAD_OP;
  }
  return vm_push(m, r);
}

enum vm_status vm_run(struct vm *m, const struct program *p, long *result) {
  int pc = 0;
  long a, b;
  enum vm_status st;
  while (pc < p->length) {
    const struct instr *in = &p->code[pc++];
    m->steps++;
    switch (in->op) {
      case OP_PUSH:
        if ((st = vm_push(m, in->arg))) return st;
        break;
      case OP_ADD: case OP_SUB: case OP_MUL: case OP_DIV: case OP_MOD: case OP_LT: case OP_EQ:
        if ((st = vm_binary(m, in->op))) return st;
        break;
      case OP_NEG:
        if ((st = vm_pop(m, &a))) return st;
        vm_push(m, -a);
        break;
      case OP_DUP:
        if ((st = vm_pop(m, &a))) return st;
        vm_push(m, a);
        if ((st = vm_push(m, a))) return st;
        break;
      case OP_SWAP:
        if (vm_pop(m, &b) || vm_pop(m, &a)) return VM_STACK_UNDERFLOW;
        vm_push(m, b);
        vm_push(m, a);
        break;
      case OP_JMP:
        pc = (int)in->arg;
        break;
      case OP_JZ:
        if ((st = vm_pop(m, &a))) return st;
        if (a == 0) pc = (int)in->arg;
        break;
      case OP_LOAD:
        if ((st = vm_push(m, m->vars[in->arg % 26]))) return st;
        break;
      case OP_STORE:
        if ((st = vm_pop(m, &a))) return st;
        m->vars[in->arg % 26] = a;
        break;
      case OP_PRINT:
        if ((st = vm_pop(m, &a))) return st;
        *result = a;
        break;
      case OP_HALT:
        return VM_OK;
      default:
        return VM_BAD_OP;
    }
  }
  return VM_OK;
}

const char *status_name(enum vm_status st) {
  switch (st) {
    case VM_OK: return "ok";
    case VM_STACK_UNDERFLOW: return "underflow";
    case VM_STACK_OVERFLOW: return "overflow";
    case VM_DIV_ZERO: return "division by zero";
    case VM_BAD_OP: return "bad opcode";
  }
  return "?";
}

const char *opcode_name(enum opcode op) {
  static const char *names[] = {"push", "add", "sub", "mul", "div", "mod", "neg", "dup", "swap",
                                "jmp", "jz", "lt", "eq", "print", "halt", "load", "store"};
  return (unsigned)op < sizeof names / sizeof names[0] ? names[op] : "?";
}

void disassemble_program(const struct program *p, FILE *out) {
  for (int i = 0; i < p->length; i++) {
    if (p->code[i].op == OP_PUSH || p->code[i].op == OP_JMP || p->code[i].op == OP_JZ)
      fprintf(out, "%3d %s %ld\n", i, opcode_name(p->code[i].op), p->code[i].arg);
    else
      fprintf(out, "%3d %s\n", i, opcode_name(p->code[i].op));
  }
}

int build_countdown(struct program *p, long start) {
  p->length = 0;
  emit(p, OP_PUSH, start);
  emit(p, OP_STORE, 0);
  emit(p, OP_LOAD, 0);
  emit(p, OP_JZ, 11);
  emit(p, OP_LOAD, 1);
  emit(p, OP_LOAD, 0);
  emit(p, OP_ADD, 0);
  emit(p, OP_STORE, 1);
  emit(p, OP_LOAD, 0);
  emit(p, OP_PUSH, 1);
  emit(p, OP_SUB, 0);
  emit(p, OP_STORE, 0);
  emit(p, OP_JMP, 2);
  return p->length;
}

int peephole(struct program *p) {
  int out = 0, removed = 0;
  for (int i = 0; i < p->length; i++) {
    if (i + 1 < p->length && p->code[i].op == OP_PUSH && p->code[i + 1].op == OP_NEG) {
      p->code[out].op = OP_PUSH;
      p->code[out].arg = -p->code[i].arg;
      out++;
      i++;
      removed++;
      continue;
    }
    p->code[out++] = p->code[i];
  }
  p->length = out;
  return removed;
}

void vm_reset(struct vm *m) {
  memset(m, 0, sizeof *m);
}

long eval_string(const char *src, enum vm_status *status) {
  struct program p;
  struct vm m;
  long r = 0;
  vm_reset(&m);
  if (compile_expr(src, &p) < 0) {
    *status = VM_BAD_OP;
    return 0;
  }
  peephole(&p);
  *status = vm_run(&m, &p, &r);
  return r;
}

int main(int argc, char **argv) {
  static struct program prog;
  struct vm m;
  enum vm_status st;
  long r = 0;
  const char *src = argc > 1 ? argv[1] : "(3 + 4) * -2 - 10 % 4";

  r = eval_string(src, &st);
  printf("%s = %ld (%s)\n", src, r, status_name(st));
  compile_expr(src, &prog);
  disassemble_program(&prog, stdout);
  build_countdown(&prog, argc > 2 ? atol(argv[2]) : 10);
  vm_reset(&m);
  st = vm_run(&m, &prog, &r);
  printf("sum=%ld steps=%d %s\n", m.vars[1], m.steps, status_name(st));
  r = eval_string("1 / 0", &st);
  printf("%ld %s\n", r, status_name(st));
  return 0;
}
