import { EmbeddedForm, FormState, LineStatus, parseEmbeddedForm } from './types';

export function initialState(form: EmbeddedForm): FormState {
  return {
    formId: form.form_id,
    lines: form.lines.map((record) => ({ record: { ...record }, dirty: false })),
    lastSavedAt: null,
  };
}

export function setText(state: FormState, lineId: string, text: string): void {
  const line = state.lines.find((l) => l.record.id === lineId);
  if (!line) return;
  // canonical composition so exports match what the CLI writes
  line.record.text = text.normalize('NFC');
  line.dirty = true;
}

export function setStatus(state: FormState, lineId: string, status: LineStatus): void {
  const line = state.lines.find((l) => l.record.id === lineId);
  if (!line) return;
  line.record.status = status;
  line.dirty = true;
}

export function toggleStatus(state: FormState, lineId: string): void {
  const line = state.lines.find((l) => l.record.id === lineId);
  if (!line) return;
  setStatus(state, lineId, line.record.status === 'checked' ? 'draft' : 'checked');
}

/** Completion counters are always derived, never stored. */
export function progress(state: FormState): { checked: number; total: number } {
  const checked = state.lines.filter((l) => l.record.status === 'checked').length;
  return { checked, total: state.lines.length };
}

export function serialize(state: FormState): string {
  return JSON.stringify({
    form_id: state.formId,
    lines: state.lines.map((l) => l.record),
  });
}

/**
 * Merge a saved snapshot into a fresh state built from the embedded data.
 * Lines are matched by id; snapshot lines for other forms or removed lines
 * are ignored, so stale storage can never corrupt a form.
 */
export function restoreInto(state: FormState, snapshotJson: string): number {
  let snapshot: EmbeddedForm;
  try {
    snapshot = parseEmbeddedForm(JSON.parse(snapshotJson));
  } catch {
    return 0;
  }
  if (snapshot.form_id !== state.formId) return 0;
  let restored = 0;
  for (const saved of snapshot.lines) {
    const line = state.lines.find((l) => l.record.id === saved.id);
    if (!line) continue;
    line.record.text = saved.text;
    line.record.status = saved.status;
    line.record.note = saved.note;
    restored += 1;
  }
  return restored;
}
