// Session export/import. A session IS a stance document, so exported files
// run through the CLI unchanged and CLI test stances import directly.

import { SchemaViolation, validateStance } from "./schema.js";
import { StanceDocument } from "./types.js";

export function exportSession(doc: StanceDocument): string {
  validateStance(doc);
  return JSON.stringify(doc, null, 2) + "\n";
}

export function importSession(text: string): StanceDocument {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    throw new SchemaViolation("(document)", `not valid JSON: ${(err as Error).message}`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new SchemaViolation("(document)", "expected a JSON object");
  }
  const doc = parsed as StanceDocument;
  validateStance(doc);
  return doc;
}
