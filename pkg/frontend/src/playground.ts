/** Constraint playground state: debounced server checks and a render
 * model for the outcome (holds / violated with residual / error with a
 * caret position in the constraint text). */

import { ApiError } from './api.js';
import type { CheckRequest, CheckResponse } from './types.js';

export interface PlaygroundInput {
  constraint: string;
  bindings: Record<string, number>;
  angleUnit: 'degrees' | 'radians';
}

export type PlaygroundView =
  | { status: 'holds'; residual: number | null; lhs: number | null; rhs: number | null }
  | {
      status: 'violated';
      residual: number | null;
      lhs: number | null;
      rhs: number | null;
      violatedSpans: [number, number][];
    }
  | { status: 'error'; code: string; message: string; offset: number | null };

export function toCheckRequest(input: PlaygroundInput): CheckRequest {
  return {
    constraint: input.constraint,
    bindings: input.bindings,
    angle_unit: input.angleUnit,
  };
}

export function viewFromResponse(response: CheckResponse): PlaygroundView {
  if (response.holds) {
    return {
      status: 'holds',
      residual: response.residual,
      lhs: response.lhs_value,
      rhs: response.rhs_value,
    };
  }
  return {
    status: 'violated',
    residual: response.residual,
    lhs: response.lhs_value,
    rhs: response.rhs_value,
    violatedSpans: response.violated_subterms,
  };
}

export function viewFromError(error: unknown): PlaygroundView {
  if (error instanceof ApiError) {
    return { status: 'error', code: error.code, message: error.message, offset: error.offset() };
  }
  return { status: 'error', code: 'NETWORK', message: String(error), offset: null };
}

/** Caret line/column for an error offset, for highlighting in a textarea. */
export function caretPosition(text: string, offset: number): { line: number; column: number } {
  const clamped = Math.max(0, Math.min(offset, text.length));
  const before = text.slice(0, clamped);
  const lines = before.split('\n');
  const line = lines.length;
  const last = lines[lines.length - 1] ?? '';
  return { line, column: last.length + 1 };
}

/** Trailing-edge debounce; the returned function also exposes cancel(). */
export function debounce<Args extends unknown[]>(
  fn: (...args: Args) => void,
  waitMs: number,
): ((...args: Args) => void) & { cancel(): void } {
  let timer: ReturnType<typeof setTimeout> | undefined;
  const wrapped = (...args: Args): void => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== undefined) {
      clearTimeout(timer);
      timer = undefined;
    }
  };
  return wrapped;
}
