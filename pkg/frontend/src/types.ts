export type LineStatus = 'draft' | 'checked';

/** One embedded line record; the same shape round-trips through the manifest. */
export interface LineRecord {
  id: string;
  sha256: string;
  text: string;
  status: LineStatus;
  note: string;
}

export interface EmbeddedForm {
  form_id: string;
  lines: LineRecord[];
}

export interface LineState {
  record: LineRecord;
  dirty: boolean;
}

export interface FormState {
  formId: string;
  lines: LineState[];
  lastSavedAt: number | null;
}

export function isLineStatus(v: unknown): v is LineStatus {
  return v === 'draft' || v === 'checked';
}

/** Validate untrusted JSON (embedded payload or a restored snapshot). */
export function parseEmbeddedForm(raw: unknown): EmbeddedForm {
  if (typeof raw !== 'object' || raw === null) throw new Error('form data is not an object');
  const obj = raw as Record<string, unknown>;
  if (typeof obj.form_id !== 'string') throw new Error('missing form_id');
  if (!Array.isArray(obj.lines)) throw new Error('missing lines array');
  const lines = obj.lines.map((ln, i) => {
    if (typeof ln !== 'object' || ln === null) throw new Error(`line ${i} is not an object`);
    const rec = ln as Record<string, unknown>;
    if (typeof rec.id !== 'string' || typeof rec.sha256 !== 'string') {
      throw new Error(`line ${i}: missing id or sha256`);
    }
    const status = rec.status ?? 'draft';
    if (!isLineStatus(status)) throw new Error(`line ${i}: bad status ${String(rec.status)}`);
    return {
      id: rec.id,
      sha256: rec.sha256,
      text: typeof rec.text === 'string' ? rec.text : '',
      status,
      note: typeof rec.note === 'string' ? rec.note : '',
    };
  });
  const ids = new Set(lines.map((l) => l.id));
  if (ids.size !== lines.length) throw new Error('duplicate line ids');
  return { form_id: obj.form_id, lines };
}
