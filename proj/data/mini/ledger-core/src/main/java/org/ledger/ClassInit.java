package org.ledger;

import java.util.List;

public class ClassInit {
    private final MethodNode clinit;
    private AbstractInsnNode jumpSite;

    public ClassInit(MethodNode clinit) {
        this.clinit = clinit;
    }

    void rewrite() {
        // Remove jumpsite if unused
        boolean used = false;
        for (AbstractInsnNode n : clinit.instructions) {
            used |= n == jumpSite;
        }
        if (!used) {
            // clinit.instructions.remove(jumpSite.getPrevious());
            clinit.instructions.remove(jumpSite);
        }
    }

    /**
     * Keep this for legacy code.
     */
    public void reset() {
        rewrite();
    }

    /**
     * Obsoleted method which does nothing.
     */
    public void flush() {
    }

    void unlock(Lock lock) {
        try {
            lock.release();
        } catch (IllegalStateException e) {
            // couldn't release lock. No problem, this is legacy code anyways.
        }
    }

    // Old code, needs rewrite
    int legacyChecksum(byte[] data) {
        int sum = 0;
        for (byte b : data) sum += b;
        return sum;
    }

    /** Returns the number of instructions in the initializer. */
    int size() {
        return clinit.instructions.size();
    }

    // Not used;
    private List<String> names;
}
