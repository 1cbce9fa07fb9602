import { EmbeddedForm, LineRecord } from '../src/types';

export function makeForm(n: number, formId = 'form-1'): EmbeddedForm {
  const lines: LineRecord[] = [];
  for (let i = 0; i < n; i++) {
    lines.push({
      id: `p000-l${String(i).padStart(3, '0')}`,
      sha256: 'ab'.repeat(32),
      text: '',
      status: 'draft',
      note: '',
    });
  }
  return { form_id: formId, lines };
}

export class FakeStorage implements Storage {
  private map = new Map<string, string>();
  failing = false;

  get length(): number {
    return this.map.size;
  }
  clear(): void {
    this.map.clear();
  }
  getItem(key: string): string | null {
    if (this.failing) throw new Error('storage disabled');
    return this.map.get(key) ?? null;
  }
  key(index: number): string | null {
    return [...this.map.keys()][index] ?? null;
  }
  removeItem(key: string): void {
    this.map.delete(key);
  }
  setItem(key: string, value: string): void {
    if (this.failing) throw new Error('storage disabled');
    this.map.set(key, value);
  }
}
