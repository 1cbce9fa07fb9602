"use strict";
(() => {
  // src/types.ts
  function isLineStatus(v) {
    return v === "draft" || v === "checked";
  }
  function parseEmbeddedForm(raw) {
    if (typeof raw !== "object" || raw === null) throw new Error("form data is not an object");
    const obj = raw;
    if (typeof obj.form_id !== "string") throw new Error("missing form_id");
    if (!Array.isArray(obj.lines)) throw new Error("missing lines array");
    const lines = obj.lines.map((ln, i) => {
      if (typeof ln !== "object" || ln === null) throw new Error(`line ${i} is not an object`);
      const rec = ln;
      if (typeof rec.id !== "string" || typeof rec.sha256 !== "string") {
        throw new Error(`line ${i}: missing id or sha256`);
      }
      const status = rec.status ?? "draft";
      if (!isLineStatus(status)) throw new Error(`line ${i}: bad status ${String(rec.status)}`);
      return {
        id: rec.id,
        sha256: rec.sha256,
        text: typeof rec.text === "string" ? rec.text : "",
        status,
        note: typeof rec.note === "string" ? rec.note : ""
      };
    });
    const ids = new Set(lines.map((l) => l.id));
    if (ids.size !== lines.length) throw new Error("duplicate line ids");
    return { form_id: obj.form_id, lines };
  }

  // src/state.ts
  function initialState(form) {
    return {
      formId: form.form_id,
      lines: form.lines.map((record) => ({ record: { ...record }, dirty: false })),
      lastSavedAt: null
    };
  }
  function setText(state, lineId, text) {
    const line = state.lines.find((l) => l.record.id === lineId);
    if (!line) return;
    line.record.text = text.normalize("NFC");
    line.dirty = true;
  }
  function setStatus(state, lineId, status) {
    const line = state.lines.find((l) => l.record.id === lineId);
    if (!line) return;
    line.record.status = status;
    line.dirty = true;
  }
  function toggleStatus(state, lineId) {
    const line = state.lines.find((l) => l.record.id === lineId);
    if (!line) return;
    setStatus(state, lineId, line.record.status === "checked" ? "draft" : "checked");
  }
  function progress(state) {
    const checked = state.lines.filter((l) => l.record.status === "checked").length;
    return { checked, total: state.lines.length };
  }
  function serialize(state) {
    return JSON.stringify({
      form_id: state.formId,
      lines: state.lines.map((l) => l.record)
    });
  }
  function restoreInto(state, snapshotJson) {
    let snapshot;
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

  // src/storage.ts
  var KEY_PREFIX = "transcription-form:";
  var SAVE_DELAY_MS = 1500;
  function storageKey(formId) {
    return KEY_PREFIX + formId;
  }
  function storageAvailable(store = globalThis.localStorage) {
    if (!store) return false;
    try {
      const probe = KEY_PREFIX + "__probe__";
      store.setItem(probe, "1");
      store.removeItem(probe);
      return true;
    } catch {
      return false;
    }
  }
  function saveNow(state, store = globalThis.localStorage) {
    store.setItem(storageKey(state.formId), serialize(state));
    state.lastSavedAt = Date.now();
  }
  function loadSnapshot(formId, store = globalThis.localStorage) {
    try {
      return store.getItem(storageKey(formId));
    } catch {
      return null;
    }
  }
  function makeAutosaver(state, store = globalThis.localStorage, delayMs = SAVE_DELAY_MS) {
    let timer = null;
    const write = () => {
      timer = null;
      try {
        saveNow(state, store);
      } catch (e) {
        console.error("autosave failed", e);
      }
    };
    return {
      touch() {
        if (timer !== null) clearTimeout(timer);
        timer = setTimeout(write, delayMs);
      },
      flush() {
        if (timer !== null) clearTimeout(timer);
        write();
      }
    };
  }

  // src/export.ts
  function exportManifest(state) {
    return JSON.stringify(
      {
        form_id: state.formId,
        lines: state.lines.map((l) => ({
          id: l.record.id,
          sha256: l.record.sha256,
          text: l.record.text.normalize("NFC"),
          status: l.record.status,
          note: l.record.note
        }))
      },
      null,
      2
    );
  }
  function manifestFilename(state) {
    return `transcription-${state.formId}.json`;
  }
  function downloadManifest(state, doc = document) {
    const blob = new Blob([exportManifest(state)], { type: "application/json;charset=utf-8" });
    const url = URL.createObjectURL(blob);
    const anchor = doc.createElement("a");
    anchor.href = url;
    anchor.download = manifestFilename(state);
    doc.body.appendChild(anchor);
    anchor.click();
    anchor.remove();
    URL.revokeObjectURL(url);
  }

  // src/render.ts
  function showBanner(doc, message, kind) {
    let banner = doc.getElementById("banner");
    if (!banner) {
      banner = doc.createElement("div");
      banner.id = "banner";
      doc.body.insertBefore(banner, doc.body.firstChild);
    }
    banner.textContent = message;
    banner.setAttribute("data-kind", kind);
    banner.setAttribute(
      "style",
      `padding:.5em;margin-bottom:1em;border:1px solid;${kind === "error" ? "background:#fdd;border-color:#c00" : "background:#ffd;border-color:#cc0"}`
    );
  }
  function updateProgress(doc, state) {
    const el = doc.getElementById("progress-count");
    if (!el) return;
    const { checked, total } = progress(state);
    el.textContent = `${checked}/${total} checked`;
  }
  function rowFor(doc, lineId) {
    return doc.querySelector(`.line[data-line-id="${lineId}"]`);
  }
  function inputFor(doc, lineId) {
    return doc.getElementById(`text-${lineId}`);
  }
  function markRow(row, checked) {
    row.style.opacity = checked ? "0.7" : "1";
    const box = row.querySelector('input[type="checkbox"]');
    if (box) box.checked = checked;
  }
  function focusLine(doc, state, index) {
    const line = state.lines[index];
    if (!line) return;
    const input = inputFor(doc, line.record.id);
    if (input) {
      input.focus();
      input.scrollIntoView({ block: "center" });
    }
  }
  function wireLine(doc, state, line, index, hooks) {
    const row = rowFor(doc, line.record.id);
    const input = inputFor(doc, line.record.id);
    if (!row || !input) return;
    input.value = line.record.text;
    const label = doc.createElement("label");
    label.style.display = "inline-block";
    label.style.marginTop = ".2em";
    const box = doc.createElement("input");
    box.type = "checkbox";
    box.checked = line.record.status === "checked";
    label.appendChild(box);
    label.appendChild(doc.createTextNode(" checked"));
    row.appendChild(label);
    markRow(row, box.checked);
    const toggle = () => {
      toggleStatus(state, line.record.id);
      markRow(row, line.record.status === "checked");
      updateProgress(doc, state);
      hooks.onEdit();
    };
    input.addEventListener("input", () => {
      setText(state, line.record.id, input.value);
      hooks.onEdit();
    });
    input.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        ev.preventDefault();
        if (ev.ctrlKey) toggle();
        else focusLine(doc, state, index + 1);
      }
    });
    box.addEventListener("change", toggle);
  }
  function renderForm(doc, state, hooks) {
    const progressBar = doc.getElementById("progress");
    if (progressBar) {
      progressBar.innerHTML = "";
      const count = doc.createElement("span");
      count.id = "progress-count";
      progressBar.appendChild(count);
      const exportBtn = doc.createElement("button");
      exportBtn.id = "export-button";
      exportBtn.textContent = "Export manifest";
      exportBtn.style.marginInlineStart = "1em";
      exportBtn.addEventListener("click", () => hooks.onExport());
      progressBar.appendChild(exportBtn);
      const hint = doc.createElement("span");
      hint.textContent = " Enter: next line - Ctrl+Enter: toggle checked";
      hint.style.marginInlineStart = "1em";
      hint.style.color = "#777";
      progressBar.appendChild(hint);
    }
    if (state.lines.length === 0) {
      const root = doc.getElementById("form-root");
      if (root) root.textContent = "No text lines were found on the scanned pages, so there is nothing to transcribe.";
    }
    state.lines.forEach((line, i) => wireLine(doc, state, line, i, hooks));
    updateProgress(doc, state);
  }

  // src/main.ts
  function boot(doc) {
    const payload = doc.getElementById("line-data");
    if (!payload || !payload.textContent) {
      showBanner(doc, "This form is missing its embedded line data and cannot be edited.", "error");
      return;
    }
    let state;
    try {
      state = initialState(parseEmbeddedForm(JSON.parse(payload.textContent)));
    } catch (e) {
      showBanner(doc, `Embedded line data is malformed: ${e instanceof Error ? e.message : e}`, "error");
      return;
    }
    const persistent = storageAvailable();
    if (persistent) {
      const snapshot = loadSnapshot(state.formId);
      if (snapshot) restoreInto(state, snapshot);
    } else {
      showBanner(
        doc,
        "Browser storage is unavailable: edits will not survive a reload. Export the manifest before closing.",
        "warning"
      );
    }
    const saver = persistent ? makeAutosaver(state) : null;
    renderForm(doc, state, {
      onEdit: () => saver?.touch(),
      onExport: () => {
        saver?.flush();
        downloadManifest(state, doc);
      }
    });
    window.addEventListener("pagehide", () => saver?.flush());
  }
  if (typeof document !== "undefined") {
    if (document.readyState === "loading") {
      document.addEventListener("DOMContentLoaded", () => boot(document));
    } else {
      boot(document);
    }
  }
})();
